#include "tq/modular.hpp"

namespace tq {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    Int r;
    Int aa(static_cast<unsigned long>(a % m)), mm(static_cast<unsigned long>(m));
    if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0) throw Error("value not invertible modulo m");
    return r.get_ui();
}

std::size_t rank_mod(std::vector<std::vector<u64>> m, u64 p) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] % p == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        u64 inv = invmod(m[r][c] % p, p);
        for (std::size_t i = r + 1; i < rows; ++i) {
            u64 f = mulmod(m[i][c] % p, inv, p);
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] % p + p - mulmod(f, m[r][j] % p, p)) % p;
        }
        ++r;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 bound) {
    std::vector<bool> sieve(bound + 1, true);
    std::vector<u64> out;
    for (u64 i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return out;
}

int legendre(const Int& a, u64 p) {
    Int pp(static_cast<unsigned long>(p));
    return mpz_legendre(mod_positive(a, pp).get_mpz_t(), pp.get_mpz_t());
}

bool sqrt_mod(u64 a, u64 p, u64& root) {
    a %= p;
    if (a == 0) {
        root = 0;
        return true;
    }
    if (p == 2) {
        root = a;
        return true;
    }
    if (powmod(a, (p - 1) / 2, p) != 1) return false;
    if (p % 4 == 3) {
        root = powmod(a, (p + 1) / 4, p);
        return true;
    }
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = static_cast<u64>(s);
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    root = r;
    return true;
}

long valuation(const Int& z, const Int& p) {
    if (z == 0) return kInfiniteValuation;
    Int t = z;
    long v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

long valuation(const Rat& r, const Int& p) {
    if (r == 0) return kInfiniteValuation;
    return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

Int mod_positive(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int residue(const Rat& r, const Int& m) {
    Int inv;
    Int den = r.get_den();
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
        if (m == 1) return 0;
        throw Error("rational is not integral at the modulus prime");
    }
    return mod_positive(r.get_num() * inv, m);
}

Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

PartialFactorization trial_factor(Int n, u64 bound) {
    PartialFactorization out;
    n = abs(n);
    if (n == 0) {
        out.cofactor = 0;
        return out;
    }
    for (u64 p : primes_up_to(bound)) {
        if (n == 1) break;
        Int pp(static_cast<unsigned long>(p));
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
            mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
            ++e;
        }
        if (e) out.factors.emplace_back(pp, e);
    }
    out.cofactor = n;
    return out;
}

FFPoint FFPoint::normalized(u64 p, std::vector<u64> coords) {
    std::size_t i = 0;
    while (i < coords.size() && coords[i] % p == 0) ++i;
    if (i == coords.size()) throw Error("projective point cannot be zero");
    u64 inv = invmod(coords[i] % p, p);
    for (auto& c : coords) c = mulmod(c % p, inv, p);
    return {p, std::move(coords)};
}

std::size_t PadicApprox::first_unit() const {
    Int pp(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!mpz_divisible_p(coords[i].get_mpz_t(), pp.get_mpz_t())) return i;
    throw Error("p-adic point is not primitive");
}

PadicApprox make_padic(u64 p, unsigned precision, const IntVec& coords) {
    if (!is_prime(p)) throw Error("p-adic point needs a prime");
    if (precision == 0) throw Error("p-adic precision must be positive");
    PadicApprox a{p, precision, {}};
    Int m = a.modulus();
    for (const auto& c : coords) a.coords.push_back(mod_positive(c, m));
    a.first_unit();
    return a;
}

bool projectively_congruent(const IntVec& x, const PadicApprox& target, unsigned k) {
    if (x.size() != target.coords.size()) throw DimensionMismatch("point dimension mismatch");
    if (k > target.precision) throw Error("congruence requested beyond target precision");
    std::size_t j = target.first_unit();
    Int m = pow_int(Int(static_cast<unsigned long>(target.p)), k);
    Int pp(static_cast<unsigned long>(target.p));
    if (mpz_divisible_p(x[j].get_mpz_t(), pp.get_mpz_t())) return false;
    Int xi, ti;
    mpz_invert(xi.get_mpz_t(), Int(mod_positive(x[j], m)).get_mpz_t(), m.get_mpz_t());
    mpz_invert(ti.get_mpz_t(), Int(mod_positive(target.coords[j], m)).get_mpz_t(), m.get_mpz_t());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mod_positive(x[i] * xi - target.coords[i] * ti, m) != 0) return false;
    }
    return true;
}

}  // namespace tq
