#pragma once

// Local solvability at real and p-adic places, Hensel and Newton lifting,
// and weak approximation on a quadric through a rational base point.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tq/modular.hpp"
#include "tq/poly.hpp"
#include "tq/quadform.hpp"

namespace tq {

struct Place {
    bool real = true;
    u64 p = 0;

    static Place infinite() { return {true, 0}; }
    static Place prime(u64 p);
    std::string name() const { return real ? "real" : std::to_string(p); }
    friend bool operator==(const Place&, const Place&) = default;
};

/// A point at a place together with the closeness required of approximations.
/// Real: rational approximant and strict sup-norm tolerance after projective
/// normalization. Finite: p-adic point and required congruence precision k.
struct LocalTarget {
    Place place;
    Vec real_point;
    Rat eps;
    PadicApprox padic;
    unsigned k = 0;

    static LocalTarget real_target(Vec point, Rat eps);
    static LocalTarget finite_target(PadicApprox point, unsigned k);
};

/// Hilbert symbol (a, b)_v for nonzero rationals.
int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);
bool is_local_square(const Rat& a, const Place& v);
bool quadric_locally_solvable(const QuadForm& q, const Place& v);

struct SmoothPointSearch {
    std::optional<FFPoint> point;
    bool exhaustive = false;  // true with no point means none exists
};
SmoothPointSearch smooth_point_mod_p(const PolySystem& f, u64 p, u64 budget, std::uint64_t seed = 0);

struct HenselReport {
    PadicApprox point;
    std::vector<std::size_t> minor;  // Jacobian columns of the chosen minor
    long v_delta = 0;                // valuation of that minor at the start point
    long v_residual = 0;             // min valuation of the equations at the start point
};
HenselReport hensel_lift_report(const PolySystem& f, const PadicApprox& p0, unsigned k);
PadicApprox hensel_lift(const PolySystem& f, const PadicApprox& p0, unsigned k);

std::vector<long double> newton_refine_real(const PolySystem& f, std::vector<long double> p0, unsigned iterations);

/// Exact Kantorovich test at a rational point for a system of degree <= 2:
/// with beta = |J_S^-1|, eta = |J_S^-1 f(x0)| and Lipschitz constant lip of J_S
/// (sup norms, S the chosen columns), beta*lip*eta <= 1/2 guarantees a real zero
/// within `radius` of x0.
struct Kantorovich {
    bool ok = false;
    std::vector<std::size_t> minor;
    Rat beta, eta, lip, radius;
};
Kantorovich kantorovich_check(const PolySystem& f, const Vec& x0);

struct LocalPoint {
    Place place;
    Vec real_point;  // approximant; a true zero lies within real_radius
    Rat real_radius;
    PadicApprox padic;
};
LocalPoint perturbed_point(const PolySystem& f, const PolySystem& fj, const LocalTarget& target);

/// Exact check that x meets a target's tolerance.
bool target_satisfied(const IntVec& x, const LocalTarget& t);

IntVec weak_approx_quadric(const QuadForm& q, const Vec& base, const std::vector<LocalTarget>& targets,
                           const Int& height_bound, std::uint64_t seed = 0);

std::vector<long double> to_real(const Vec& v);
Vec from_real(const std::vector<long double>& v);

}  // namespace tq
