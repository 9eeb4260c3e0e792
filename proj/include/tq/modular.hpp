#pragma once

// Finite-field and p-adic elements plus the small number-theory toolkit
// (primality, Legendre symbols, square roots mod p, valuations).

#include <cstdint>
#include <utility>
#include <vector>

#include "tq/rational.hpp"

namespace tq {

using u64 = std::uint64_t;

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 bound);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 invmod(u64 a, u64 m);
/// Rank of a matrix with entries reduced mod the prime p.
std::size_t rank_mod(std::vector<std::vector<u64>> m, u64 p);
/// Legendre symbol (a|p) for an odd prime p, in {-1, 0, 1}.
int legendre(const Int& a, u64 p);
/// Some square root of a mod an odd prime p; nullopt-like false when a is a non-residue.
bool sqrt_mod(u64 a, u64 p, u64& root);

/// p-adic valuation; returns a large sentinel for zero.
constexpr long kInfiniteValuation = 1L << 40;
long valuation(const Int& z, const Int& p);
long valuation(const Rat& r, const Int& p);
/// Residue of a p-integral rational modulo m (m a power of p).
Int residue(const Rat& r, const Int& m);
Int mod_positive(const Int& a, const Int& m);
Int pow_int(const Int& base, unsigned long e);

/// Trial division up to `bound`; returns (prime, exponent) pairs and the unfactored cofactor.
struct PartialFactorization {
    std::vector<std::pair<Int, unsigned>> factors;
    Int cofactor;  // 1 when fully factored
};
PartialFactorization trial_factor(Int n, u64 bound);

/// Projective point over F_p with first nonzero coordinate equal to 1.
struct FFPoint {
    u64 p = 0;
    std::vector<u64> coords;

    static FFPoint normalized(u64 p, std::vector<u64> coords);
    friend bool operator==(const FFPoint&, const FFPoint&) = default;
};

/// Point over Q_p known modulo p^precision; some coordinate is a unit.
struct PadicApprox {
    u64 p = 0;
    unsigned precision = 0;
    IntVec coords;  // residues in [0, p^precision)

    Int modulus() const { return pow_int(Int(static_cast<unsigned long>(p)), precision); }
    /// Index of the first unit coordinate; throws when the point is not primitive.
    std::size_t first_unit() const;
    friend bool operator==(const PadicApprox&, const PadicApprox&) = default;
};

PadicApprox make_padic(u64 p, unsigned precision, const IntVec& coords);

/// Projective congruence: x == y mod p^k after scaling both so that the
/// first unit coordinate of `target` is 1 (target must be primitive).
bool projectively_congruent(const IntVec& x, const PadicApprox& target, unsigned k);

}  // namespace tq
