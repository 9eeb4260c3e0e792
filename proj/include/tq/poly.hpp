#pragma once

// Sparse multivariate polynomials with rational coefficients and systems of them.

#include <map>
#include <vector>

#include "tq/modular.hpp"
#include "tq/quadform.hpp"

namespace tq {

using Exponents = std::vector<unsigned>;

class Poly {
public:
    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly from_quadform(const QuadForm& q);
    static Poly linear(const Vec& coeffs);

    std::size_t nvars() const noexcept { return nvars_; }
    const std::map<Exponents, Rat>& terms() const noexcept { return terms_; }
    void add_term(const Exponents& e, const Rat& c);

    bool is_zero() const { return terms_.empty(); }
    std::size_t degree() const;
    bool is_homogeneous() const;

    Rat eval(const Vec& x) const;
    long double eval_real(const std::vector<long double>& x) const;
    /// Value mod m at an integer point; coefficients must be integral at the primes of m.
    Int eval_mod(const IntVec& x, const Int& m) const;
    Poly derivative(std::size_t var) const;
    Poly scaled(const Rat& c) const;

    friend bool operator==(const Poly&, const Poly&) = default;

private:
    std::size_t nvars_ = 0;
    std::map<Exponents, Rat> terms_;
};

struct PolySystem {
    std::size_t nvars = 0;
    std::vector<Poly> eqs;

    PolySystem() = default;
    PolySystem(std::size_t nvars, std::vector<Poly> eqs);
    static PolySystem from_forms(const std::vector<QuadForm>& forms);

    std::size_t size() const noexcept { return eqs.size(); }
    std::size_t max_degree() const;

    Vec eval(const Vec& x) const;
    /// r x nvars Jacobian at x.
    Mat jacobian(const Vec& x) const;
    std::vector<std::vector<long double>> jacobian_real(const std::vector<long double>& x) const;
    std::vector<long double> eval_real(const std::vector<long double>& x) const;
    /// Each equation scaled by a positive rational to have primitive integer coefficients.
    PolySystem integral() const;

    friend bool operator==(const PolySystem&, const PolySystem&) = default;
};

}  // namespace tq
