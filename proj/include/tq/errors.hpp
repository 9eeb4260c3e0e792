#pragma once

#include <stdexcept>
#include <string>

namespace tq {

/// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A search or enumeration ran past its configured budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation does not hold for the given input.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

/// A closed-form formula was queried outside its validity range.
class NotApplicable : public Error {
public:
    using Error::Error;
};

/// Malformed JSON, certificate or command-line input.
class Malformed : public Error {
public:
    using Error::Error;
};

}  // namespace tq
