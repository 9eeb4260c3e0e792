#include "tq/local.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "tq/pencil.hpp"
#include "tq/random.hpp"

namespace tq {

Place Place::prime(u64 p) {
    if (!is_prime(p)) throw PreconditionViolated("finite place needs a prime");
    return {false, p};
}

LocalTarget LocalTarget::real_target(Vec point, Rat eps) {
    if (eps <= 0) throw PreconditionViolated("real tolerance must be positive");
    if (is_zero(point)) throw PreconditionViolated("target point cannot be zero");
    LocalTarget t;
    t.place = Place::infinite();
    t.real_point = std::move(point);
    t.eps = std::move(eps);
    return t;
}

LocalTarget LocalTarget::finite_target(PadicApprox point, unsigned k) {
    if (k == 0 || k > point.precision) throw PreconditionViolated("congruence precision must lie in 1..precision");
    point.first_unit();
    LocalTarget t;
    t.place = Place::prime(point.p);
    t.padic = std::move(point);
    t.k = k;
    return t;
}

std::vector<long double> to_real(const Vec& v) {
    std::vector<long double> out;
    for (const auto& c : v) out.push_back(static_cast<long double>(c.get_d()));
    return out;
}

Vec from_real(const std::vector<long double>& v) {
    Vec out;
    for (long double c : v) {
        if (!std::isfinite(c)) throw Error("non-finite real coordinate");
        // exact binary value of the long double, truncated to 64 mantissa bits
        int e = 0;
        long double m = std::frexp(c, &e);
        long long mant = static_cast<long long>(std::ldexp(m, 62));
        Rat r(Int(std::to_string(mant)));
        int shift = e - 62;
        if (shift >= 0) r *= pow_int(2, static_cast<unsigned long>(shift));
        else r /= pow_int(2, static_cast<unsigned long>(-shift));
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------- symbols

namespace {

// a = p^v * u with u prime to p
void split_unit(const Int& a, const Int& p, long& v, Int& u) {
    v = 0;
    u = a;
    while (mpz_divisible_p(u.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
}

// integer with the same square class as a nonzero rational
Int square_class(const Rat& a) {
    if (a == 0) throw PreconditionViolated("Hilbert symbol of zero");
    return a.get_num() * a.get_den();
}

unsigned mod_small(const Int& a, unsigned m) { return static_cast<unsigned>(mod_positive(a, Int(m)).get_ui()); }

}  // namespace

int hilbert_symbol(const Rat& ra, const Rat& rb, const Place& v) {
    Int a = square_class(ra), b = square_class(rb);
    if (v.real) return (a < 0 && b < 0) ? -1 : 1;
    Int p(static_cast<unsigned long>(v.p));
    long alpha, beta;
    Int u, w;
    split_unit(a, p, alpha, u);
    split_unit(b, p, beta, w);
    if (v.p == 2) {
        auto eps = [](const Int& x) { return ((mod_small(x, 4) + 3) % 4) / 2; };  // (x-1)/2 mod 2
        auto omega = [](const Int& x) {
            unsigned r = mod_small(x, 8);
            return (r * r - 1) / 8 % 2;
        };
        unsigned e = eps(u) * eps(w) + static_cast<unsigned>(alpha % 2) * omega(w) + static_cast<unsigned>(beta % 2) * omega(u);
        return e % 2 ? -1 : 1;
    }
    int s = 1;
    if ((alpha * beta) % 2 == 1 && v.p % 4 == 3) s = -s;
    if (beta % 2 == 1) s *= legendre(u, v.p);
    if (alpha % 2 == 1) s *= legendre(w, v.p);
    return s;
}

bool is_local_square(const Rat& ra, const Place& v) {
    if (ra == 0) return true;
    if (v.real) return ra > 0;
    Int a = square_class(ra);
    Int p(static_cast<unsigned long>(v.p));
    long e;
    Int u;
    split_unit(a, p, e, u);
    if (e % 2) return false;
    if (v.p == 2) return mod_small(u, 8) == 1;
    return legendre(u, v.p) == 1;
}

bool quadric_locally_solvable(const QuadForm& q, const Place& v) {
    auto dg = congruence_diagonalize(q);
    Vec d;
    for (std::size_t i = 0; i < q.n(); ++i)
        if (dg.d(i, i) != 0) d.push_back(dg.d(i, i));
    const std::size_t r = d.size();
    if (r < q.n()) return true;  // a radical vector is a zero
    if (v.real) {
        bool pos = std::any_of(d.begin(), d.end(), [](const Rat& x) { return x > 0; });
        bool neg = std::any_of(d.begin(), d.end(), [](const Rat& x) { return x < 0; });
        return pos && neg;
    }
    if (r >= 5) return true;
    if (r <= 1) return false;
    Rat disc = 1;
    for (const auto& x : d) disc *= x;
    if (r == 2) return is_local_square(-disc, v);
    int eps = 1;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) eps *= hilbert_symbol(d[i], d[j], v);
    if (r == 3) return eps == hilbert_symbol(-1, -disc, v);
    if (!is_local_square(disc, v)) return true;
    return eps == hilbert_symbol(-1, -1, v);
}

// ------------------------------------------------------------- mod p points

namespace {

struct ModPoly {
    std::vector<std::pair<Exponents, u64>> terms;
};

struct ModSystem {
    u64 p;
    std::size_t nvars;
    std::vector<ModPoly> eqs;
    std::vector<std::vector<ModPoly>> jac;  // jac[i][v]

    static ModPoly reduce(const Poly& f, u64 p) {
        ModPoly m;
        Int pp(static_cast<unsigned long>(p));
        for (const auto& [e, c] : f.terms()) {
            u64 r = residue(c, pp).get_ui();
            if (r) m.terms.emplace_back(e, r);
        }
        return m;
    }

    ModSystem(const PolySystem& f, u64 prime) : p(prime), nvars(f.nvars) {
        auto fi = f.integral();
        for (const auto& e : fi.eqs) {
            eqs.push_back(reduce(e, p));
            std::vector<ModPoly> row;
            for (std::size_t v = 0; v < nvars; ++v) row.push_back(reduce(e.derivative(v), p));
            jac.push_back(std::move(row));
        }
    }

    u64 eval(const ModPoly& f, const std::vector<u64>& x) const {
        u64 acc = 0;
        for (const auto& [e, c] : f.terms) {
            u64 t = c;
            for (std::size_t i = 0; i < nvars && t; ++i)
                for (unsigned k = 0; k < e[i]; ++k) t = mulmod(t, x[i], p);
            acc = (acc + t) % p;
        }
        return acc;
    }

    bool smooth_zero(const std::vector<u64>& x) const {
        for (const auto& f : eqs)
            if (eval(f, x) != 0) return false;
        std::vector<std::vector<u64>> j(eqs.size(), std::vector<u64>(nvars));
        for (std::size_t i = 0; i < eqs.size(); ++i)
            for (std::size_t v = 0; v < nvars; ++v) j[i][v] = eval(jac[i][v], x);
        return rank_mod(std::move(j), p) == eqs.size();
    }
};

}  // namespace

SmoothPointSearch smooth_point_mod_p(const PolySystem& f, u64 p, u64 budget, std::uint64_t seed) {
    if (p < 3 || !is_prime(p)) throw PreconditionViolated("smooth point search needs an odd prime");
    const std::size_t n = f.nvars;
    if (n == 0) throw PreconditionViolated("system has no variables");
    ModSystem ms(f, p);
    SmoothPointSearch out;
    if (projective_point_count(p, n) <= budget) {
        out.exhaustive = true;
        std::vector<u64> x(n);
        for (std::size_t lead = n; lead-- > 0;) {
            std::fill(x.begin(), x.end(), 0);
            x[lead] = 1;
            for (;;) {
                if (ms.smooth_zero(x)) {
                    out.point = FFPoint::normalized(p, x);
                    return out;
                }
                std::size_t j = n;
                bool carry = true;
                while (carry && j > lead + 1) {
                    --j;
                    if (++x[j] < p) carry = false;
                    else x[j] = 0;
                }
                if (carry) break;
            }
        }
        return out;
    }
    Rng rng(seed);
    const bool quadratic = f.max_degree() <= 2 && !ms.eqs.empty();
    for (u64 s = 0; s < budget; ++s) {
        std::vector<u64> x(n);
        for (auto& c : x) c = static_cast<u64>(rng.uniform(0, static_cast<long>(p) - 1));
        if (!quadratic) {
            if (std::any_of(x.begin(), x.end(), [](u64 c) { return c != 0; }) && ms.smooth_zero(x))
                return {FFPoint::normalized(p, x), false};
            continue;
        }
        std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
        // f_0 restricted to the line through x in direction e_j: a s^2 + b s + c
        u64 g[3];
        for (u64 v = 0; v < 3; ++v) {
            x[j] = v % p;
            g[v] = ms.eval(ms.eqs[0], x);
        }
        u64 inv2 = invmod(2, p);
        u64 a = mulmod((g[2] + 2 * (p - g[1]) + g[0]) % p, inv2, p);
        u64 b = (g[1] + 2 * p - g[0] - a) % p;
        u64 c = g[0];
        std::vector<u64> roots;
        if (a == 0) {
            if (b != 0) roots.push_back(mulmod(p - c, invmod(b, p), p));
        } else {
            u64 disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
            u64 r;
            if (sqrt_mod(disc, p, r)) {
                u64 inv = invmod(mulmod(2, a, p), p);
                roots.push_back(mulmod((p - b + r) % p, inv, p));
                roots.push_back(mulmod((2 * p - b - r) % p, inv, p));
            }
        }
        for (u64 root : roots) {
            x[j] = root;
            if (std::all_of(x.begin(), x.end(), [](u64 v) { return v == 0; })) continue;
            if (ms.smooth_zero(x)) return {FFPoint::normalized(p, x), false};
        }
    }
    return out;
}

// ------------------------------------------------------------------ Hensel

namespace {

// all k-subsets of {0..n-1} in lexicographic order
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

Mat columns(const Mat& m, const std::vector<std::size_t>& cols) {
    Mat out(m.rows(), cols.size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(i, cols[j]);
    return out;
}

long min_valuation(const Vec& v, const Int& p) {
    long m = kInfiniteValuation;
    for (const auto& x : v) m = std::min(m, valuation(x, p));
    return m;
}

}  // namespace

HenselReport hensel_lift_report(const PolySystem& f, const PadicApprox& p0, unsigned k) {
    if (p0.coords.size() != f.nvars) throw DimensionMismatch("p-adic point has wrong number of coordinates");
    if (k == 0) throw PreconditionViolated("target precision must be positive");
    p0.first_unit();
    const Int p(static_cast<unsigned long>(p0.p));
    const PolySystem fi = f.integral();
    const std::size_t r = fi.size();
    Vec x = to_vec(p0.coords);

    HenselReport rep;
    rep.v_residual = min_valuation(fi.eval(x), p);
    Mat j = fi.jacobian(x);
    long best = kInfiniteValuation;
    for (const auto& s : subsets(fi.nvars, r)) {
        long v = valuation(det(columns(j, s)), p);
        if (v < best) {
            best = v;
            rep.minor = s;
        }
    }
    rep.v_delta = best;
    const Int mk = pow_int(p, k);
    auto finish = [&](const Vec& y) {
        IntVec c;
        for (const auto& v : y) c.push_back(residue(v, mk));
        rep.point = PadicApprox{p0.p, k, std::move(c)};
        return rep;
    };
    if (rep.v_residual >= static_cast<long>(k)) return finish(x);
    if (best == kInfiniteValuation || rep.v_residual <= 2 * best) {
        std::string cols;
        for (auto c : rep.minor) cols += (cols.empty() ? "" : ",") + std::to_string(c);
        throw PreconditionViolated("Hensel condition fails: residual valuation " + std::to_string(rep.v_residual) +
                                   " is not above twice the minor valuation " +
                                   (best == kInfiniteValuation ? std::string("inf") : std::to_string(best)) +
                                   " (columns " + cols + ")");
    }
    const Int mod = pow_int(p, k + 2 * static_cast<unsigned long>(best) + 2);
    for (int iter = 0; iter < 256; ++iter) {
        Vec fx = fi.eval(x);
        if (min_valuation(fx, p) >= static_cast<long>(k)) break;
        Mat js = columns(fi.jacobian(x), rep.minor);
        Vec delta;
        if (!solve(js, scale(-1, fx), delta)) throw Error("Hensel step lost the Jacobian minor");
        for (std::size_t a = 0; a < r; ++a) {
            std::size_t c = rep.minor[a];
            x[c] = Rat(residue(x[c] + delta[a], mod));
        }
        if (iter == 255) throw Error("Hensel iteration failed to converge");
    }
    // distance bound: corrections are divisible by p^(v_residual - v_delta)
    Int bound = pow_int(p, static_cast<unsigned long>(std::min<long>(rep.v_residual - best, k)));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!mpz_divisible_p(Int(x[i].get_num() - p0.coords[i]).get_mpz_t(), bound.get_mpz_t()))
            throw Error("Hensel lift violated the distance bound");
    return finish(x);
}

PadicApprox hensel_lift(const PolySystem& f, const PadicApprox& p0, unsigned k) { return hensel_lift_report(f, p0, k).point; }

// -------------------------------------------------------------- real places

std::vector<long double> newton_refine_real(const PolySystem& f, std::vector<long double> x, unsigned iterations) {
    if (x.size() != f.nvars) throw DimensionMismatch("point has wrong number of coordinates");
    const std::size_t r = f.size();
    auto resid = [&](const std::vector<long double>& y) {
        long double m = 0;
        for (long double v : f.eval_real(y)) m = std::max(m, std::fabs(v));
        return m;
    };
    long double prev = resid(x);
    int worse = 0;
    for (unsigned it = 0; it < iterations && prev > 0; ++it) {
        auto fx = f.eval_real(x);
        auto j = f.jacobian_real(x);
        // minimal-norm step: x -= J^T (J J^T)^{-1} f
        std::vector<std::vector<long double>> g(r, std::vector<long double>(r + 1));
        long double scale = 0;
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                long double s = 0;
                for (std::size_t v = 0; v < f.nvars; ++v) s += j[a][v] * j[b][v];
                g[a][b] = s;
                scale = std::max(scale, std::fabs(s));
            }
            g[a][r] = fx[a];
        }
        if (scale == 0) throw PreconditionViolated("singular Jacobian");
        for (std::size_t c = 0; c < r; ++c) {
            std::size_t piv = c;
            for (std::size_t a = c + 1; a < r; ++a)
                if (std::fabs(g[a][c]) > std::fabs(g[piv][c])) piv = a;
            if (std::fabs(g[piv][c]) < 1e-14L * scale) throw PreconditionViolated("singular Jacobian");
            std::swap(g[piv], g[c]);
            for (std::size_t a = 0; a < r; ++a) {
                if (a == c) continue;
                long double m = g[a][c] / g[c][c];
                for (std::size_t b = c; b <= r; ++b) g[a][b] -= m * g[c][b];
            }
        }
        std::vector<long double> y(r);
        for (std::size_t a = 0; a < r; ++a) y[a] = g[a][r] / g[a][a];
        std::vector<long double> next = x;
        for (std::size_t v = 0; v < f.nvars; ++v)
            for (std::size_t a = 0; a < r; ++a) next[v] -= j[a][v] * y[a];
        long double cur = resid(next);
        if (cur > prev) {
            if (++worse >= 3) throw Error("Newton iteration diverges");
        } else {
            worse = 0;
        }
        if (cur >= prev && cur < 1e-15L) break;  // rounding floor reached
        x = std::move(next);
        prev = cur;
    }
    return x;
}

Kantorovich kantorovich_check(const PolySystem& f, const Vec& x0) {
    if (f.max_degree() > 2) throw NotApplicable("Kantorovich certificate implemented for degree <= 2");
    const std::size_t r = f.size();
    Mat j = f.jacobian(x0);
    const Vec fx = f.eval(x0);
    // second derivatives are constant for degree <= 2
    std::vector<Mat> hess;
    for (const auto& eq : f.eqs) {
        Mat h(f.nvars, f.nvars);
        for (std::size_t a = 0; a < f.nvars; ++a) {
            Poly da = eq.derivative(a);
            for (std::size_t b = 0; b < f.nvars; ++b) h(a, b) = da.derivative(b).eval(x0);
        }
        hess.push_back(std::move(h));
    }
    auto norm_inf = [](const Mat& m) {
        Rat best_row = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Rat s = 0;
            for (std::size_t c = 0; c < m.cols(); ++c) s += abs(m(i, c));
            best_row = std::max(best_row, s);
        }
        return best_row;
    };
    // among nonsingular minors keep the smallest beta*lip*eta, first on ties
    Kantorovich out;
    std::optional<Rat> best;
    for (const auto& s : subsets(f.nvars, r)) {
        Mat js = columns(j, s);
        if (det(js) == 0) continue;
        Kantorovich k;
        k.minor = s;
        Mat inv = inverse(js);
        k.beta = norm_inf(inv);
        k.eta = 0;
        for (const auto& v : inv * fx) k.eta = std::max(k.eta, Rat(abs(v)));
        k.lip = 0;
        for (const auto& h : hess) {
            Rat sum = 0;
            for (auto a : s)
                for (auto b : s) sum += abs(h(a, b));
            k.lip = std::max(k.lip, sum);
        }
        Rat score = k.beta * k.lip * k.eta;
        if (best && score >= *best) continue;
        best = score;
        k.ok = score <= Rat(1, 2);
        k.radius = k.lip == 0 ? k.eta : Rat(2 * k.eta);
        out = std::move(k);
    }
    return out;
}

LocalPoint perturbed_point(const PolySystem& f, const PolySystem& fj, const LocalTarget& target) {
    if (f.nvars != fj.nvars || f.size() != fj.size()) throw DimensionMismatch("perturbed system has a different shape");
    LocalPoint out;
    out.place = target.place;
    if (!target.place.real) {
        out.padic = hensel_lift(fj, target.padic, target.k);
        return out;
    }
    if (rank(f.jacobian(target.real_point)) < f.size())
        throw PreconditionViolated("target is not a smooth point of the original system");
    auto start = kantorovich_check(fj, target.real_point);
    if (!start.ok) throw PreconditionViolated("perturbation too large for the Newton condition at the target");
    auto refined = from_real(newton_refine_real(fj, to_real(target.real_point), 60));
    auto cert = kantorovich_check(fj, refined);
    if (!cert.ok || cert.radius > start.radius + start.radius) {
        out.real_point = target.real_point;
        out.real_radius = start.radius;
        return out;
    }
    out.real_point = std::move(refined);
    out.real_radius = cert.radius;
    return out;
}

// -------------------------------------------------------- weak approximation

namespace {

std::size_t max_abs_index(const Vec& t) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (abs(t[i]) > abs(t[j])) j = i;
    return j;
}

Int round_rat(const Rat& x) {
    Rat y = x + Rat(1, 2);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    return q;
}

Int gram_eval(const std::vector<std::vector<Int>>& g, const IntVec& x, const IntVec& y) {
    Int s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Int row = 0;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0) row += g[i][j] * y[j];
        s += x[i] * row;
    }
    return s;
}

}  // namespace

bool target_satisfied(const IntVec& x, const LocalTarget& t) {
    if (!t.place.real) return projectively_congruent(x, t.padic, t.k);
    if (x.size() != t.real_point.size()) throw DimensionMismatch("point dimension mismatch");
    std::size_t j = max_abs_index(t.real_point);
    if (x[j] == 0) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Rat d = Rat(x[i], x[j]) - t.real_point[i] / t.real_point[j];
        d.canonicalize();
        if (abs(d) >= t.eps) return false;
    }
    return true;
}

IntVec weak_approx_quadric(const QuadForm& q, const Vec& base, const std::vector<LocalTarget>& targets,
                           const Int& height_bound, std::uint64_t seed) {
    const std::size_t n = q.n();
    if (rank(q) < 3) throw PreconditionViolated("weak approximation needs rank >= 3");
    if (base.size() != n) throw DimensionMismatch("base point dimension mismatch");
    if (eval_form(q, base) != 0) throw PreconditionViolated("base point is not on the quadric");
    if (is_zero(gradient(q, base))) throw PreconditionViolated("base point is singular");
    const auto g = primitive_integer_gram2(q);
    const IntVec b0 = primitive(base);
    const PolySystem single = PolySystem::from_forms({q});

    const LocalTarget* real = nullptr;
    std::vector<const LocalTarget*> finite;
    for (const auto& t : targets) {
        if (t.place.real) {
            if (real) throw PreconditionViolated("at most one real target");
            if (t.real_point.size() != n) throw DimensionMismatch("target dimension mismatch");
            real = &t;
            Vec tn = scale(1 / t.real_point[max_abs_index(t.real_point)], t.real_point);
            Rat size = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) size += abs(q(i, j));
            if (abs(eval_form(q, tn)) > 4 * t.eps * size) throw PreconditionViolated("incompatible target: real point is not on the quadric");
        } else {
            if (t.padic.coords.size() != n) throw DimensionMismatch("target dimension mismatch");
            for (const auto* o : finite)
                if (o->place.p == t.place.p) throw PreconditionViolated("two targets at the same prime");
            Int mk = pow_int(Int(static_cast<unsigned long>(t.place.p)), t.k);
            if (single.integral().eqs[0].eval_mod(t.padic.coords, mk) != 0)
                throw PreconditionViolated("incompatible target: point is not on the quadric mod p^" + std::to_string(t.k));
            finite.push_back(&t);
        }
    }

    if (real && eval_form(q, real->real_point) == 0 && !is_zero(real->real_point)) {
        IntVec r = primitive(real->real_point);
        if (std::all_of(targets.begin(), targets.end(), [&](const LocalTarget& t) { return target_satisfied(r, t); }) &&
            height(r) <= height_bound)
            return r;
    }

    Rng rng(seed);
    // a base congruent to a target (or at the real target) is degenerate for
    // the projection, so later rounds move the base along the quadric
    auto attempt_base = [&](const IntVec& b) -> std::optional<IntVec> {
    for (unsigned slack = 0; slack < 8; slack += 2) {
        // lift finite targets far enough that the line construction preserves k digits
        Int modulus = 1;
        IntVec a(n, Int(0));
        for (const auto* t : finite) {
            const Int p(static_cast<unsigned long>(t->place.p));
            unsigned kk = t->k + 2 + slack;
            PadicApprox y;
            for (int it = 0; it < 10; ++it) {
                y = hensel_lift(single, t->padic, kk);
                Int bb = 2 * gram_eval(g, b, y.coords);
                long e = valuation(mod_positive(bb, y.modulus()), p);
                if (e >= static_cast<long>(kk)) {
                    if (kk > 4 * (t->k + 8)) return std::nullopt;
                    kk *= 2;
                    continue;
                }
                unsigned need = t->k + static_cast<unsigned>(e) + 2 + slack;
                if (kk >= need) break;
                kk = need;
            }
            Int m = y.modulus();
            for (std::size_t i = 0; i < n; ++i) {
                // CRT: a' = a (mod modulus), a' = y (mod m)
                Int inv;
                mpz_invert(inv.get_mpz_t(), Int(mod_positive(modulus, m)).get_mpz_t(), m.get_mpz_t());
                Int c = mod_positive((y.coords[i] - a[i]) * inv, m);
                a[i] += modulus * c;
            }
            modulus *= m;
        }

        Vec tn;
        Int l0 = 1;
        if (real) {
            // dyadic rounding of the normalized target, well inside eps
            tn = scale(1 / real->real_point[max_abs_index(real->real_point)], real->real_point);
            Int den = 1;
            while (Rat(64, den) > real->eps) den *= 2;
            for (auto& v : tn) v = Rat(round_rat(v * den), den);
            l0 = lcm_denominators(tn);
        }
        for (unsigned attempt = 0; attempt < 200; ++attempt) {
            IntVec d(n);
            if (real) {
                Rat lambda = Rat(l0 * modulus) * pow_int(2, attempt);
                for (std::size_t i = 0; i < n; ++i) d[i] = a[i] + modulus * round_rat((lambda * tn[i] - a[i]) / modulus);
            } else {
                long r = static_cast<long>(attempt);
                for (std::size_t i = 0; i < n; ++i) d[i] = a[i] + modulus * (attempt ? rng.uniform(-r, r) : 0);
            }
            Int qd = gram_eval(g, d, d), bd = gram_eval(g, b, d);
            IntVec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = qd * b[i] - 2 * bd * d[i];
            if (std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; })) continue;
            IntVec xp = primitive(to_vec(x));
            if (height(xp) > height_bound) {
                if (real) break;
                continue;
            }
            if (std::all_of(targets.begin(), targets.end(), [&](const LocalTarget& t) { return target_satisfied(xp, t); }))
                return xp;
        }
    }
    return std::nullopt;
    };

    if (auto x = attempt_base(b0)) return *x;
    for (unsigned round = 1; round <= 12; ++round) {
        const long h = 1 + static_cast<long>(round) / 3;
        IntVec d(n);
        for (auto& v : d) v = rng.uniform(-h, h);
        Int qd = gram_eval(g, d, d), bd = gram_eval(g, b0, d);
        IntVec nb(n);
        for (std::size_t i = 0; i < n; ++i) nb[i] = qd * b0[i] - 2 * bd * d[i];
        if (std::all_of(nb.begin(), nb.end(), [](const Int& v) { return v == 0; })) continue;
        nb = primitive(to_vec(nb));
        if (is_zero(gradient(q, to_vec(nb)))) continue;
        if (auto x = attempt_base(nb)) return *x;
    }
    throw BudgetExceeded("height bound exhausted before every target was met");
}

}  // namespace tq
