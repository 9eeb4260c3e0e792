#include "tq/pencil.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <thread>

#include "tq/random.hpp"

namespace tq {

namespace {

// Coefficients (ascending powers) of the polynomial of degree <= d taking
// values ys[i] at x = i, via Newton divided differences.
std::vector<Rat> interpolate(const std::vector<Rat>& ys) {
    const std::size_t m = ys.size();
    std::vector<Rat> dd = ys;
    for (std::size_t k = 1; k < m; ++k)
        for (std::size_t i = m - 1; i >= k; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / Rat(static_cast<long>(k));
            if (i == k) break;
        }
    // expand sum dd[k] * prod_{j<k} (x - j)
    std::vector<Rat> out(m), basis{Rat(1)};
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < basis.size(); ++i) out[i] += dd[k] * basis[i];
        std::vector<Rat> next(basis.size() + 1);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            next[i + 1] += basis[i];
            next[i] -= basis[i] * static_cast<long>(k);
        }
        basis = std::move(next);
    }
    return out;
}

Mat combine(const Rat& a, const Mat& x, const Rat& b, const Mat& y) {
    Mat r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = a * x(i, j) + b * y(i, j);
    return r;
}

Rat horner(const std::vector<Rat>& desc, const Rat& x) {
    Rat acc;
    for (const auto& c : desc) acc = acc * x + c;
    return acc;
}

// Positive divisors of |z|; trial division with the unfactored cofactor treated as prime.
std::vector<Int> divisors(const Int& z) {
    auto f = trial_factor(z, 1000000);
    if (f.cofactor > 1) f.factors.emplace_back(f.cofactor, 1);
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : f.factors) {
        std::size_t base = out.size();
        if (base * (e + 1) > 200000) throw BudgetExceeded("too many divisors in rational root search");
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

}  // namespace

bool BinaryForm::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& c) { return c == 0; });
}

Rat BinaryForm::eval(const Rat& x, const Rat& y) const {
    Rat acc;
    for (std::size_t i = 0; i <= degree; ++i) {
        Rat term = coeffs[i];
        if (term == 0) continue;
        for (std::size_t k = 0; k < degree - i; ++k) term *= x;
        for (std::size_t k = 0; k < i; ++k) term *= y;
        acc += term;
    }
    return acc;
}

Rat TrivariateForm::eval(const Vec& t) const {
    if (t.size() != 3) throw DimensionMismatch("trivariate form takes three arguments");
    Rat acc;
    for (const auto& [e, c] : coeffs) {
        Rat term = c;
        for (int v = 0; v < 3; ++v)
            for (unsigned k = 0; k < e[v]; ++k) term *= t[v];
        acc += term;
    }
    return acc;
}

BinaryForm det_form_pencil(const QuadForm& qa, const QuadForm& qb) {
    if (qa.n() != qb.n()) throw DimensionMismatch("pencil forms differ in dimension");
    const std::size_t m = qa.n();
    std::vector<Rat> ys;
    for (std::size_t x = 0; x <= m; ++x) ys.push_back(det(combine(Rat(static_cast<long>(x)), qa.gram(), 1, qb.gram())));
    auto asc = interpolate(ys);  // det(xA + B) in powers of x
    BinaryForm f;
    f.degree = m;
    f.coeffs.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) f.coeffs[i] = asc[m - i];
    return f;
}

TrivariateForm det_form_net(const QuadSystem& s) {
    const std::size_t n = s.n();
    const Mat &a1 = s[0].gram(), &a2 = s[1].gram(), &a3 = s[2].gram();
    // g(x, y) = det(x A1 + y A2 + A3); coefficient of x^a y^b is that of t1^a t2^b t3^(n-a-b)
    std::vector<std::vector<Rat>> by_y(n + 1);  // by_y[x][b]
    for (std::size_t x = 0; x <= n; ++x) {
        std::vector<Rat> ys;
        for (std::size_t y = 0; y <= n; ++y) {
            Mat m = combine(Rat(static_cast<long>(x)), a1, Rat(static_cast<long>(y)), a2) + a3;
            ys.push_back(det(m));
        }
        by_y[x] = interpolate(ys);
    }
    TrivariateForm f;
    f.degree = n;
    for (std::size_t b = 0; b <= n; ++b) {
        std::vector<Rat> col;
        for (std::size_t x = 0; x <= n; ++x) col.push_back(by_y[x][b]);
        auto coeff = interpolate(col);
        for (std::size_t a = 0; a <= n; ++a) {
            if (coeff[a] == 0) continue;
            if (a + b > n) throw Error("net determinant interpolation produced an inhomogeneous term");
            f.coeffs[{static_cast<unsigned>(a), static_cast<unsigned>(b), static_cast<unsigned>(n - a - b)}] = coeff[a];
        }
    }
    return f;
}

Rat disc_binary(const BinaryForm& f) {
    if (f.coeffs.size() != f.degree + 1) throw Malformed("binary form coefficient count differs from degree+1");
    if (f.degree == 0) throw PreconditionViolated("discriminant needs degree >= 1");
    if (f.is_zero()) throw PreconditionViolated("discriminant of the zero form");
    const std::size_t d = f.degree;
    // g(X, Y) = f(X, Y + kX) has the same discriminant and g(1, 0) = f(1, k) != 0.
    long k = 0;
    while (f.eval(1, k) == 0) ++k;
    // coefficients of g via binomial expansion of (Y + kX)^i
    std::vector<Rat> g(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        if (f.coeffs[i] == 0) continue;
        // X^(d-i) (Y + kX)^i = sum_j C(i,j) k^(i-j) X^(d-j) Y^j
        for (std::size_t j = 0; j <= i; ++j) {
            Int c;
            mpz_bin_uiui(c.get_mpz_t(), i, j);
            g[j] += f.coeffs[i] * c * pow_int(Int(k), i - j);
        }
    }
    // p(x) = g(x, 1) with descending coefficients g[0..d]; scale to integers
    Vec gv(g.begin(), g.end());
    Int l = lcm_denominators(gv);
    std::vector<Int> p(d + 1);
    for (std::size_t i = 0; i <= d; ++i) p[i] = Rat(g[i] * l).get_num();
    Rat scale = Rat(1) / l;  // g = scale * p
    // Sylvester matrix of p (degree d) and p' (degree d-1), size 2d-1
    std::vector<Int> dp(d);
    for (std::size_t i = 0; i < d; ++i) dp[i] = p[i] * static_cast<unsigned long>(d - i);
    const std::size_t sz = 2 * d - 1;
    std::vector<std::vector<Int>> syl(sz, std::vector<Int>(sz, Int(0)));
    for (std::size_t r = 0; r + 1 < d; ++r)
        for (std::size_t i = 0; i <= d; ++i) syl[r][r + i] = p[i];
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t i = 0; i < d; ++i) syl[d - 1 + r][r + i] = dp[i];
    Int res = det_bareiss(std::move(syl));
    Rat disc = Rat(res) / Rat(p[0]);
    if ((d * (d - 1) / 2) % 2 == 1) disc = -disc;
    // Disc(s p) = s^(2d-2) Disc(p)
    Rat s_pow = 1;
    for (std::size_t i = 0; i < 2 * d - 2; ++i) s_pow *= scale;
    return disc * s_pow;
}

PairVerdict pair_nonsingular(const QuadForm& qa, const QuadForm& qb) {
    auto f = det_form_pencil(qa, qb);
    if (f.is_zero()) return {false, Rat(0)};
    if (f.degree == 0) return {true, Rat(1)};
    Rat d = disc_binary(f);
    return {d != 0, d};
}

std::vector<std::pair<Rat, Rat>> rational_roots(const BinaryForm& f) {
    if (f.is_zero()) throw PreconditionViolated("rational roots of the zero form");
    std::vector<std::pair<Rat, Rat>> out;
    const std::size_t d = f.degree;
    if (f.coeffs[0] == 0) out.emplace_back(1, 0);
    std::size_t lead = 0;
    while (f.coeffs[lead] == 0) ++lead;
    std::size_t tail = d;
    while (f.coeffs[tail] == 0) --tail;
    if (tail < d) out.emplace_back(0, 1);
    if (tail == lead) return out;
    // p(x) = sum_{i=lead..tail} c_i x^(tail-i) after removing the x^(d-tail) factor
    std::vector<Rat> desc(f.coeffs.begin() + static_cast<long>(lead), f.coeffs.begin() + static_cast<long>(tail) + 1);
    Int l = lcm_denominators(desc);
    Int lc = Rat(desc.front() * l).get_num(), k0 = Rat(desc.back() * l).get_num();
    auto num = divisors(k0), den = divisors(lc);
    std::set<Rat> found;
    for (const auto& u : num)
        for (const auto& v : den)
            for (int sg : {1, -1}) {
                Rat x(u * sg, v);
                x.canonicalize();
                if (found.count(x)) continue;
                if (horner(desc, x) == 0) found.insert(x);
            }
    for (const auto& x : found) out.emplace_back(Rat(x.get_num()), Rat(x.get_den()));
    return out;
}

bool pencil_rank_property(const QuadForm& qa, const QuadForm& qb, std::size_t samples, std::uint64_t seed) {
    if (qa.n() != qb.n()) throw DimensionMismatch("pencil forms differ in dimension");
    const std::size_t m = qa.n();
    auto ok = [&](const Rat& a, const Rat& b) { return rank(combine(a, qa.gram(), b, qb.gram())) + 1 >= m; };
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        long a = 0, b = 0;
        while (a == 0 && b == 0) {
            a = rng.uniform(-20, 20);
            b = rng.uniform(-20, 20);
        }
        if (!ok(a, b)) return false;
    }
    auto f = det_form_pencil(qa, qb);
    if (f.is_zero()) return true;
    for (const auto& [x, y] : rational_roots(f))
        if (!ok(x, y)) return false;
    return true;
}

Rat d1_value(const QuadSystem& s, const Vec& t) { return det(linear_combination(s, t).gram()); }

Rat d2_value(const QuadSystem& s, const Vec& t, const Vec& u) {
    return pair_nonsingular(linear_combination(s, t), linear_combination(s, u)).witness;
}

GeneratorTriple select_generators(const QuadSystem& s, std::uint64_t seed, std::size_t max_tries) {
    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        GeneratorTriple g;
        if (attempt == 0) {
            g.m1 = {1, 0, 0};
            g.m2 = {0, 1, 0};
            g.m3 = {0, 0, 1};
        } else {
            long h = 5 + static_cast<long>(attempt / 20);
            auto draw = [&]() {
                Vec v(3);
                while (is_zero(v))
                    for (auto& c : v) c = rng.uniform(-h, h);
                return v;
            };
            g.m1 = draw();
            g.m2 = draw();
            g.m3 = draw();
        }
        g.tries = attempt + 1;
        g.det_m = det(Mat::from_rows({g.m1, g.m2, g.m3}, 3));
        if (g.det_m == 0) continue;
        g.d1_m3 = d1_value(s, g.m3);
        if (g.d1_m3 == 0) continue;
        g.d2_m1m2 = d2_value(s, g.m1, g.m2);
        if (g.d2_m1m2 == 0) continue;
        g.d2_m1m3 = d2_value(s, g.m1, g.m3);
        if (g.d2_m1m3 == 0) continue;
        return g;
    }
    throw BudgetExceeded("no generator triple found within max_tries; the system is likely singular");
}

QuadSystem apply_generators(const QuadSystem& s, const GeneratorTriple& g) {
    return QuadSystem(linear_combination(s, g.m1), linear_combination(s, g.m2), linear_combination(s, g.m3));
}

u64 projective_point_count(u64 p, std::size_t n) {
    unsigned __int128 total = 0, pk = 1;
    const unsigned __int128 cap = std::numeric_limits<u64>::max();
    for (std::size_t i = 0; i < n; ++i) {
        total += pk;
        if (total >= cap) return std::numeric_limits<u64>::max();
        pk *= p;
        if (pk > cap) pk = cap;
    }
    return static_cast<u64>(total);
}

bool ff_less(const FFPoint& a, const FFPoint& b) { return a.coords < b.coords; }

namespace {

struct SweepContext {
    u64 p;
    std::size_t n;
    std::array<std::vector<u64>, 3> g;  // row-major n x n, entries mod p
    bool exempt;

    u64 at(int k, std::size_t i, std::size_t j) const { return g[k][i * n + j]; }

    bool singular_at(const std::vector<u64>& x) const {
        std::array<std::vector<u64>, 3> grad;
        for (int k = 0; k < 3; ++k) {
            grad[k].assign(n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                if (x[i] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) grad[k][j] = (grad[k][j] + x[i] * at(k, i, j)) % p;
            }
        }
        if (exempt && std::all_of(grad[2].begin(), grad[2].end(), [](u64 v) { return v == 0; })) return false;
        return rank_mod({grad[0], grad[1], grad[2]}, p) < 3;
    }
};

// Depth-first scan of the points with x[0..lead) = 0, x[lead] = 1 and the given
// prefix, in lexicographic order; returns true at the first singular common zero.
class ChunkScanner {
public:
    ChunkScanner(const SweepContext& ctx) : c_(ctx), x_(ctx.n), v_(3, std::vector<u64>(ctx.n)) {}

    bool scan(std::size_t lead, const std::vector<u64>& prefix) {
        std::fill(x_.begin(), x_.end(), 0);
        for (auto& v : v_) std::fill(v.begin(), v.end(), 0);
        std::array<u64, 3> val{0, 0, 0};
        std::size_t pos = lead;
        assign(pos++, 1, val);
        for (u64 c : prefix) assign(pos++, c, val);
        return dfs(pos, val);
    }

    const std::vector<u64>& point() const { return x_; }

private:
    // Sets x[i] = c: Q(x) gains c (2 v_i + c g_ii), v_j gains c g_ij for j > i.
    void assign(std::size_t i, u64 c, std::array<u64, 3>& val) {
        x_[i] = c;
        if (c == 0) return;
        const u64 p = c_.p;
        for (int k = 0; k < 3; ++k) {
            val[k] = (val[k] + c * ((2 * v_[k][i] + c * c_.at(k, i, i)) % p)) % p;
            for (std::size_t j = i + 1; j < c_.n; ++j) v_[k][j] = (v_[k][j] + c * c_.at(k, i, j)) % p;
        }
    }

    bool dfs(std::size_t i, const std::array<u64, 3>& val) {
        const std::size_t n = c_.n;
        const u64 p = c_.p;
        if (i == n) {
            if (val[0] || val[1] || val[2]) return false;
            return c_.singular_at(x_);
        }
        if (i + 1 == n) {
            for (u64 c = 0; c < p; ++c) {
                bool zero = true;
                for (int k = 0; k < 3 && zero; ++k)
                    zero = (val[k] + c * ((2 * v_[k][i] + c * c_.at(k, i, i)) % p)) % p == 0;
                if (!zero) continue;
                x_[i] = c;
                if (c_.singular_at(x_)) return true;
            }
            x_[i] = 0;
            return false;
        }
        std::array<std::vector<u64>, 3> saved;
        for (int k = 0; k < 3; ++k) saved[k].assign(v_[k].begin() + static_cast<long>(i) + 1, v_[k].end());
        for (u64 c = 0; c < p; ++c) {
            std::array<u64, 3> nv = val;
            for (int k = 0; k < 3; ++k) std::copy(saved[k].begin(), saved[k].end(), v_[k].begin() + static_cast<long>(i) + 1);
            assign(i, c, nv);
            if (dfs(i + 1, nv)) return true;
        }
        x_[i] = 0;
        return false;
    }

    const SweepContext& c_;
    std::vector<u64> x_;
    std::vector<std::vector<u64>> v_;
};

}  // namespace

FFSweep triple_nonsingular_ff(const QuadSystem& s, u64 p, u64 max_points, const SweepOptions& opts) {
    if (p < 3 || !is_prime(p)) throw PreconditionViolated("finite-field sweep needs an odd prime");
    if (p > (1ULL << 20)) throw PreconditionViolated("finite-field sweep prime is too large");
    const std::size_t n = s.n();
    FFSweep out;
    out.p = p;
    out.points = projective_point_count(p, n);
    if (out.points > max_points) {
        out.verdict = SweepVerdict::budget_exceeded;
        return out;
    }
    SweepContext ctx{p, n, {}, opts.exempt_third_radical};
    Int pp(static_cast<unsigned long>(p));
    for (int k = 0; k < 3; ++k) {
        auto m = primitive_integer_gram2(s[static_cast<std::size_t>(k)]);
        ctx.g[k].resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ctx.g[k][i * n + j] = mod_positive(m[i][j], pp).get_ui();
    }

    // chunks in lexicographic order: lead from n-1 down to 0, then a short prefix
    struct Chunk {
        std::size_t lead;
        std::vector<u64> prefix;
    };
    std::vector<Chunk> chunks;
    for (std::size_t lead = n; lead-- > 0;) {
        std::size_t rest = n - lead - 1;
        std::size_t plen = 0;
        u64 cnt = 1;
        while (plen < rest && cnt < 64) {
            cnt *= p;
            ++plen;
        }
        std::vector<u64> pre(plen, 0);
        for (u64 c = 0; c < cnt; ++c) {
            chunks.push_back({lead, pre});
            for (std::size_t j = plen; j-- > 0;) {
                if (++pre[j] < p) break;
                pre[j] = 0;
            }
        }
    }

    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next{0}, best{none};
    std::vector<std::vector<u64>> witness(chunks.size());
    auto work = [&]() {
        ChunkScanner sc(ctx);
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= chunks.size() || idx > best.load()) return;
            if (sc.scan(chunks[idx].lead, chunks[idx].prefix)) {
                witness[idx] = sc.point();
                std::size_t cur = best.load();
                while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
                }
            }
        }
    };
    unsigned workers = std::max(1u, opts.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (best.load() != none) {
        out.verdict = SweepVerdict::singular_witness;
        out.witness = FFPoint::normalized(p, witness[best.load()]);
    }
    return out;
}

}  // namespace tq
