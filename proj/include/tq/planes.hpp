#pragma once

// Isotropic vectors, hyperbolic splitting, perpendicular spaces and the
// admissibility predicates for linear spaces inside the third quadric.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tq/pencil.hpp"
#include "tq/quadform.hpp"

namespace tq {

struct HyperbolicSplit {
    std::vector<std::pair<Vec, Vec>> pairs;  // (v, w): Q(v) = Q(w) = 0, b(v, w) = 1
    std::vector<Vec> residual_basis;
    QuadForm residual_form;

    std::size_t witt_index() const { return pairs.size(); }
    /// Basis rows v1, w1, v2, w2, ..., residual.
    Mat basis() const;
};

/// Primitive integer zero of q found by bounded search after diagonalization.
std::optional<IntVec> isotropic_vector(const QuadForm& q, long height);
HyperbolicSplit split_hyperbolic(const QuadForm& q, long height);
/// Exact check that the Gram matrix in the split basis is hyperbolic blocks plus the residual.
bool verify_split(const QuadForm& q, const HyperbolicSplit& s);

LinearSpace perp_space(const QuadForm& q3, const LinearSpace& l);
QuadForm restrict_form(const QuadForm& q, const LinearSpace& l);
bool contains_in_quadric(const QuadForm& q, const LinearSpace& l);
/// Primitive integer basis of the lattice of integer points of l, LLL-reduced.
LinearSpace integral_basis(const LinearSpace& l);

struct PlaneOptions {
    std::vector<u64> ff_primes{3, 5};
    u64 budget = 100000000;  // projective points per sweep
    unsigned workers = 1;
};

enum class Verdict { admissible, not_admissible };

struct AdmissibilityReport {
    bool contained_in_q3 = false;
    Rat pair_disc;
    bool vacuous = false;  // L meets Q1 and Q2 in no point over the algebraic closure
    std::vector<FFSweep> perp_system_sweeps;
    std::vector<u64> skipped_primes;  // sweep larger than the budget
    Verdict verdict = Verdict::not_admissible;
    std::string reason;  // containment | pair_singular | perp_singular_mod_p
};

AdmissibilityReport is_admissible(const LinearSpace& l, const QuadSystem& s, const PlaneOptions& opts = {});

struct Extension {
    LinearSpace plane;
    AdmissibilityReport report;
    std::size_t tries = 0;
};

/// Rational vectors in span(isotropic) orthogonal to l under q3 and not in l.
std::vector<Vec> isotropic_points_in_perp(const QuadForm& q3, const LinearSpace& l, const std::vector<Vec>& isotropic);

/// Isotropic point of q3 orthogonal to l and outside it: from span(isotropic)
/// first, then by bounded search on a complement of l in its perpendicular space.
std::optional<Vec> isotropic_point_outside(const QuadForm& q3, const LinearSpace& l, const std::vector<Vec>& isotropic,
                                           long height);

Extension extend_plane(const LinearSpace& l, const QuadSystem& s, const std::vector<Vec>& isotropic, long height,
                       std::uint64_t seed, std::size_t max_tries, const PlaneOptions& opts = {});
Extension extend_plane(const LinearSpace& l, const QuadSystem& s, long height, std::uint64_t seed,
                       std::size_t max_tries, const PlaneOptions& opts = {});

struct ChainResult {
    bool verdict = false;
    std::vector<LinearSpace> chain;
    std::vector<AdmissibilityReport> reports;
    std::string failure;
};

ChainResult chain_admissible_check(const LinearSpace& l, const QuadSystem& s, const std::vector<Vec>& isotropic,
                                   std::uint64_t seed, long height, std::size_t max_tries, const PlaneOptions& opts = {});
ChainResult chain_admissible_check(const LinearSpace& l, const QuadSystem& s, std::uint64_t seed, long height,
                                   std::size_t max_tries, const PlaneOptions& opts = {});

/// Rational point of q on the subspace w through a base point b in w,
/// via the line through b in direction d (both ambient vectors).
Vec stereographic_point(const QuadForm& q, const Vec& b, const Vec& d);

}  // namespace tq
