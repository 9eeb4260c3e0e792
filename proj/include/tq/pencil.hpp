#pragma once

// Determinant forms and discriminants of pencils and nets of quadrics,
// exact nonsingularity certificates for pairs, and finite-field sweeps
// for triples.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tq/modular.hpp"
#include "tq/quadform.hpp"

namespace tq {

/// Binary form sum_i coeffs[i] X^(d-i) Y^i.
struct BinaryForm {
    std::size_t degree = 0;
    std::vector<Rat> coeffs;

    bool is_zero() const;
    Rat eval(const Rat& x, const Rat& y) const;
    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

/// Ternary form: exponent triple (a, b, c) with a+b+c = degree -> coefficient of t1^a t2^b t3^c.
struct TrivariateForm {
    std::size_t degree = 0;
    std::map<std::array<unsigned, 3>, Rat> coeffs;  // nonzero entries only

    bool is_zero() const { return coeffs.empty(); }
    Rat eval(const Vec& t) const;
    friend bool operator==(const TrivariateForm&, const TrivariateForm&) = default;
};

struct GeneratorTriple {
    Vec m1, m2, m3;
    // the four nonvanishing witnesses
    Rat d1_m3;     // det(m3 . Q)
    Rat d2_m1m2;   // Disc det(X m1.Q + Y m2.Q)
    Rat d2_m1m3;
    Rat det_m;     // det(m1 | m2 | m3)
    std::size_t tries = 0;

    friend bool operator==(const GeneratorTriple&, const GeneratorTriple&) = default;
};

struct PairVerdict {
    bool nonsingular = false;
    Rat witness;  // discriminant of the pencil determinant form
};

enum class SweepVerdict { no_witness, singular_witness, budget_exceeded };

struct FFSweep {
    u64 p = 0;
    SweepVerdict verdict = SweepVerdict::no_witness;
    std::optional<FFPoint> witness;
    u64 points = 0;  // projective points scanned (or required, when over budget)

    friend bool operator==(const FFSweep&, const FFSweep&) = default;
};

struct SweepOptions {
    unsigned workers = 1;
    /// Skip common zeros lying in the radical of the third form mod p
    /// (the vertex of a cone such as Q3 restricted to a perpendicular space).
    bool exempt_third_radical = false;
};

BinaryForm det_form_pencil(const QuadForm& qa, const QuadForm& qb);
TrivariateForm det_form_net(const QuadSystem& s);
Rat disc_binary(const BinaryForm& f);
PairVerdict pair_nonsingular(const QuadForm& qa, const QuadForm& qb);

/// Rational roots (X:Y) of a nonzero binary form, each as a primitive pair.
std::vector<std::pair<Rat, Rat>> rational_roots(const BinaryForm& f);
bool pencil_rank_property(const QuadForm& qa, const QuadForm& qb, std::size_t samples, std::uint64_t seed);

/// d1(t) = det(t . Q) and d2(t, u) = Disc det(X t.Q + Y u.Q).
Rat d1_value(const QuadSystem& s, const Vec& t);
Rat d2_value(const QuadSystem& s, const Vec& t, const Vec& u);

GeneratorTriple select_generators(const QuadSystem& s, std::uint64_t seed, std::size_t max_tries);
/// Forms m_i . Q for a generator triple.
QuadSystem apply_generators(const QuadSystem& s, const GeneratorTriple& g);

u64 projective_point_count(u64 p, std::size_t n);
FFSweep triple_nonsingular_ff(const QuadSystem& s, u64 p, u64 max_points, const SweepOptions& opts = {});

/// Lexicographic comparison of normalized points.
bool ff_less(const FFPoint& a, const FFPoint& b);

}  // namespace tq
