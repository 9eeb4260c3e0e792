#include "tq/poly.hpp"

#include <algorithm>
#include <numeric>

namespace tq {

void Poly::add_term(const Exponents& e, const Rat& c) {
    if (e.size() != nvars_) throw DimensionMismatch("monomial has wrong number of variables");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::from_quadform(const QuadForm& q) {
    const std::size_t n = q.n();
    Poly p(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (q(i, j) == 0) continue;
            Exponents e(n, 0);
            ++e[i];
            ++e[j];
            p.add_term(e, i == j ? q(i, j) : Rat(2 * q(i, j)));
        }
    return p;
}

Poly Poly::linear(const Vec& coeffs) {
    Poly p(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Exponents e(coeffs.size(), 0);
        e[i] = 1;
        p.add_term(e, coeffs[i]);
    }
    return p;
}

std::size_t Poly::degree() const {
    std::size_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max<std::size_t>(d, std::accumulate(e.begin(), e.end(), 0u));
    return d;
}

bool Poly::is_homogeneous() const {
    std::size_t d = degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return std::accumulate(t.first.begin(), t.first.end(), 0u) == d; });
}

Rat Poly::eval(const Vec& x) const {
    if (x.size() != nvars_) throw DimensionMismatch("point has wrong number of variables");
    Rat acc;
    for (const auto& [e, c] : terms_) {
        Rat term = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
        acc += term;
    }
    return acc;
}

long double Poly::eval_real(const std::vector<long double>& x) const {
    if (x.size() != nvars_) throw DimensionMismatch("point has wrong number of variables");
    long double acc = 0;
    for (const auto& [e, c] : terms_) {
        long double term = c.get_d();
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
        acc += term;
    }
    return acc;
}

Int Poly::eval_mod(const IntVec& x, const Int& m) const {
    if (x.size() != nvars_) throw DimensionMismatch("point has wrong number of variables");
    Int acc = 0;
    for (const auto& [e, c] : terms_) {
        Int term = residue(c, m);
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term = mod_positive(term * x[i], m);
        acc += term;
    }
    return mod_positive(acc, m);
}

Poly Poly::derivative(std::size_t var) const {
    Poly d(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents f = e;
        --f[var];
        d.add_term(f, c * static_cast<unsigned long>(e[var]));
    }
    return d;
}

Poly Poly::scaled(const Rat& c) const {
    Poly p(nvars_);
    for (const auto& [e, v] : terms_) p.add_term(e, v * c);
    return p;
}

PolySystem::PolySystem(std::size_t n, std::vector<Poly> e) : nvars(n), eqs(std::move(e)) {
    for (const auto& p : eqs)
        if (p.nvars() != nvars) throw DimensionMismatch("system equations differ in variable count");
}

PolySystem PolySystem::from_forms(const std::vector<QuadForm>& forms) {
    if (forms.empty()) throw PreconditionViolated("empty form list");
    std::vector<Poly> eqs;
    for (const auto& q : forms) eqs.push_back(Poly::from_quadform(q));
    return PolySystem(forms.front().n(), std::move(eqs));
}

std::size_t PolySystem::max_degree() const {
    std::size_t d = 0;
    for (const auto& p : eqs) d = std::max(d, p.degree());
    return d;
}

Vec PolySystem::eval(const Vec& x) const {
    Vec out;
    for (const auto& p : eqs) out.push_back(p.eval(x));
    return out;
}

Mat PolySystem::jacobian(const Vec& x) const {
    Mat j(eqs.size(), nvars);
    for (std::size_t i = 0; i < eqs.size(); ++i)
        for (std::size_t v = 0; v < nvars; ++v) j(i, v) = eqs[i].derivative(v).eval(x);
    return j;
}

std::vector<long double> PolySystem::eval_real(const std::vector<long double>& x) const {
    std::vector<long double> out;
    for (const auto& p : eqs) out.push_back(p.eval_real(x));
    return out;
}

std::vector<std::vector<long double>> PolySystem::jacobian_real(const std::vector<long double>& x) const {
    std::vector<std::vector<long double>> j(eqs.size(), std::vector<long double>(nvars));
    for (std::size_t i = 0; i < eqs.size(); ++i)
        for (std::size_t v = 0; v < nvars; ++v) j[i][v] = eqs[i].derivative(v).eval_real(x);
    return j;
}

PolySystem PolySystem::integral() const {
    std::vector<Poly> out;
    for (const auto& p : eqs) {
        Int l = 1, g = 0;
        for (const auto& [e, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        for (const auto& [e, c] : p.terms()) {
            Int v = Rat(c * l).get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        out.push_back(g == 0 ? p : p.scaled(Rat(l) / Rat(g)));
    }
    return PolySystem(nvars, std::move(out));
}

}  // namespace tq
