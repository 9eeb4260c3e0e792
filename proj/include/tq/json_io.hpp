#pragma once

// JSON encodings. Rationals and big integers are strings ("-3/4", "12");
// primes, precisions and counts are JSON numbers. Parsing failures raise
// Malformed.

#include <string>

#include <json.hpp>

#include "tq/descent.hpp"
#include "tq/fano.hpp"

namespace tq {

using Json = nlohmann::json;

Json to_json(const Rat& r);
Json to_json(const Int& z);
Json to_json(const Vec& v);
Json to_json(const IntVec& v);
Json to_json(const QuadForm& q);
Json to_json(const QuadSystem& s);
Json to_json(const LinearSpace& l);
Json to_json(const FFPoint& p);
Json to_json(const PadicApprox& p);
Json to_json(const Place& p);
Json to_json(const LocalTarget& t);
Json to_json(const Signature& s);
Json to_json(const GeneratorTriple& g);
Json to_json(const HyperbolicSplit& s);
Json to_json(const FFSweep& s);
Json to_json(const AdmissibilityReport& r);
Json to_json(const CountRecord& r);
Json to_json(const DescentBudgets& b);
Json to_json(const DescentInput& in);
Json to_json(const LocalWitness& w);
Json to_json(const TRecord& r);
Json to_json(const DescentCertificate& c);

template <class T>
T from_json(const Json& j);

/// Parses text; Malformed on syntax errors.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace tq
