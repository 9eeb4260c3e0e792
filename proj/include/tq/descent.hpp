#pragma once

// The descent pipeline: generator selection, real-place balancing, hyperbolic
// splitting, an admissible 3-plane approximating the local data, extension to
// a 7-plane, and an exactly re-verifiable certificate of all of it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tq/local.hpp"
#include "tq/pencil.hpp"
#include "tq/planes.hpp"

namespace tq {

struct DescentBudgets {
    std::size_t generator_tries = 200;
    std::size_t c_candidates = 64;
    long split_height = 6;
    std::size_t plane_tries = 12;
    std::size_t extend_tries = 30;
    u64 sweep_points = 100000000;
    unsigned approx_height_digits = 400;
    unsigned padic_extra = 8;
    long final_height = 100;
    u64 final_points = 500000;
    u64 smooth_point_budget = 1000000;

    friend bool operator==(const DescentBudgets&, const DescentBudgets&) = default;
};

struct DescentInput {
    QuadSystem system;
    std::vector<LocalTarget> targets;  // at most one per place
    Rat epsilon = Rat(1, 10);
    std::uint64_t seed = 0;
    DescentBudgets budgets;
    std::vector<u64> ff_primes{3, 5};
    std::vector<u64> forced_t;  // finite places added to T regardless of local points
};

/// Point on Q1 = Q2 = 0 inside the first plane of the chain, near a target.
/// Real: exact coordinates c in the plane basis with a certified real zero
/// within `radius` (sup norm on c). Finite: c and the ambient point mod p^K.
struct LocalWitness {
    Place place;
    Vec coords;
    Vec point;
    Rat radius;
    PadicApprox padic_coords;
    PadicApprox padic_point;

    friend bool operator==(const LocalWitness&, const LocalWitness&) = default;
};

/// A place where the 3-plane lacked points, the vector added to fix it, and
/// the resulting point on the 4-plane.
struct TRecord {
    u64 p = 0;
    bool forced = false;
    IntVec extension;
    LocalWitness witness;

    friend bool operator==(const TRecord&, const TRecord&) = default;
};

struct DescentCertificate {
    std::size_t n = 0;
    bool n_at_least_19 = false;
    bool s_covers_small_primes = false;
    std::uint64_t seed = 0;
    GeneratorTriple generators;
    Rat c;
    Signature c_signature;
    QuadSystem adjusted;
    HyperbolicSplit split;
    std::vector<LinearSpace> chain;  // dimensions 3, 4, ..., 7
    std::vector<AdmissibilityReport> reports;
    std::vector<LocalWitness> local_witnesses;
    std::vector<u64> disc_primes;  // primes >= 37 dividing the 3-plane pair discriminant that were tested
    Int disc_cofactor = 1;         // unfactored part of that discriminant
    std::vector<TRecord> t_record;
    long final_height_bound = 0;
    std::optional<IntVec> final_point;
    std::size_t plane_attempts = 0;
};

struct Preprocessed {
    QuadSystem adjusted;
    GeneratorTriple generators;
    Rat c;
    Signature c_signature;
    HyperbolicSplit split;
};

Preprocessed preprocess(const QuadSystem& s, std::uint64_t seed, const DescentBudgets& b = {});

/// Checks the targets lie on all three quadrics at their places.
void validate_input(const DescentInput& in);

struct PlaneResult {
    LinearSpace plane;
    AdmissibilityReport report;
    ChainResult chain;  // chain-admissibility evidence, starting at the plane
    std::vector<LocalWitness> witnesses;
    std::size_t attempts = 0;
};

PlaneResult find_chain_admissible_3plane(const DescentInput& in, const Preprocessed& pre, unsigned workers = 1);

struct TExtension {
    LinearSpace plane;
    std::vector<TRecord> records;
};

/// Places of T must be primes p >= 37 outside the target set.
TExtension extend_for_T(const LinearSpace& l3, const Preprocessed& pre, const DescentInput& in,
                        const std::vector<std::pair<u64, bool>>& t, unsigned workers = 1);

ChainResult extend_to_7plane(const LinearSpace& l, const Preprocessed& pre, std::uint64_t seed,
                             const DescentBudgets& b, const PlaneOptions& opts);

/// Bounded search over small integer combinations of an LLL basis of l7.
std::optional<IntVec> final_point_search(const QuadSystem& s, const LinearSpace& l7, long height, u64 max_points);

DescentCertificate run_descent(const DescentInput& in, unsigned workers = 1);

struct VerifyReport {
    bool ok = true;
    std::string failing_claim;
    std::string detail;
};

VerifyReport verify_certificate(const DescentCertificate& cert, const DescentInput& in, bool rerun_sweeps = false,
                                unsigned workers = 1);

/// Exact sup distance between x and the target after normalizing both by the
/// target's largest coordinate.
Rat projective_distance(const Vec& x, const Vec& target);

}  // namespace tq
