#pragma once

// Dimensions of Fano varieties of t-planes on quadrics of rank r in P^(n-1),
// and a finite-field plane counter used to check them empirically.

#include <cstdint>
#include <optional>
#include <vector>

#include "tq/modular.hpp"
#include "tq/quadform.hpp"

namespace tq {

struct FanoQuery {
    long n = 0;
    long t = 0;
    long r = 0;
};

struct CountRecord {
    u64 p = 0;
    long t = 0;
    u64 count = 0;
};

/// t <= n - r/2 - 1, compared exactly.
bool fano_nonempty(const FanoQuery& q);
/// nullopt when the variety is empty; throws NotApplicable outside the formula ranges.
std::optional<long> fano_dim(const FanoQuery& q);
std::optional<long> fano_dim_through_point(const FanoQuery& q);

struct CountOptions {
    unsigned workers = 1;
    u64 max_cells = 100000000;  // bound on p^((t+1)(n-t-1))
};

/// Number of projective t-planes over F_p contained in the quadric Q = 0.
CountRecord count_planes_ff(const QuadForm& q, u64 p, long t, const CountOptions& opts = {});

/// Least-squares slope of log(count) against log(p), rounded.
long fit_count_degree(const std::vector<CountRecord>& records);
/// Slope through the two largest primes only, rounded.
long fit_count_degree_top2(const std::vector<CountRecord>& records);

}  // namespace tq
