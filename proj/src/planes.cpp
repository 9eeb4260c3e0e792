#include "tq/planes.hpp"

#include <algorithm>

#include "tq/lattice.hpp"
#include "tq/random.hpp"

namespace tq {

namespace {

bool is_rat_square(const Rat& x) {
    if (x < 0) return false;
    return mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

Rat rat_sqrt(const Rat& x) {
    Int a, b;
    mpz_sqrt(a.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), x.get_den_mpz_t());
    return Rat(a, b);
}

// Scale factor c with d * c^2 a squarefree integer (up to an unfactored cofactor).
Rat squarefree_scale(const Rat& d) {
    Int m = d.get_num() * d.get_den();
    Int s = 1;
    auto f = trial_factor(m, 20000);
    for (const auto& [p, e] : f.factors)
        for (unsigned k = 0; k + 1 < e; k += 2) s *= p;
    if (f.cofactor > 1 && mpz_perfect_square_p(f.cofactor.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), f.cofactor.get_mpz_t());
        s *= r;
    }
    Rat r(d.get_den(), s);
    r.canonicalize();
    return r;
}

struct Entry {
    Vec u;  // ambient vector
    Rat f;  // Q(u)
};

// Orthogonal vectors spanning the part of span(us) orthogonal to v and w, diagonalized.
std::vector<Entry> complement(const QuadForm& q, const std::vector<Entry>& us, const Vec& v, const Vec& w) {
    const std::size_t k = us.size();
    Mat c(2, k);
    for (std::size_t m = 0; m < k; ++m) {
        c(0, m) = bilinear(q, v, us[m].u);
        c(1, m) = bilinear(q, w, us[m].u);
    }
    auto ker = kernel(c);
    std::vector<Vec> vecs;
    for (const auto& a : ker) {
        Vec x(q.n());
        for (std::size_t m = 0; m < k; ++m) x = add(x, scale(a[m], us[m].u));
        vecs.push_back(x);
    }
    std::vector<Entry> out;
    if (vecs.empty()) return out;
    QuadForm sub = congruence(q, Mat::from_rows(vecs, q.n()));
    auto dg = congruence_diagonalize(sub);
    for (std::size_t j = 0; j < vecs.size(); ++j) {
        Vec x(q.n());
        for (std::size_t m = 0; m < vecs.size(); ++m) x = add(x, scale(dg.u(m, j), vecs[m]));
        out.push_back({x, dg.d(j, j)});
    }
    return out;
}

void normalize(Entry& e) {
    if (e.f == 0) {
        IntVec p = primitive(e.u);
        e.u = to_vec(p);
        return;
    }
    Rat c = squarefree_scale(e.f);
    e.u = scale(c, e.u);
    e.f *= c * c;
}

// Isotropic combination of the given orthogonal entries, bounded search.
std::optional<Vec> isotropic_in(const std::vector<const Entry*>& es, long height) {
    const std::size_t k = es.size();
    const Rat& fl = es[k - 1]->f;
    if (k == 2) {
        Rat r = -es[0]->f / fl;
        if (!is_rat_square(r)) return std::nullopt;
        Rat s = rat_sqrt(r);
        return add(es[0]->u, scale(s, es[1]->u));
    }
    // coefficients a_0..a_{k-2} in [-h, h], last one solved
    std::vector<long> a(k - 1, -height);
    for (;;) {
        if (std::any_of(a.begin(), a.end(), [](long x) { return x != 0; })) {
            bool first_nonneg = true;
            for (long x : a)
                if (x != 0) {
                    first_nonneg = x > 0;
                    break;
                }
            if (first_nonneg) {
                Rat s = 0;
                for (std::size_t m = 0; m + 1 < k; ++m) s += es[m]->f * a[m] * a[m];
                Rat r = -s / fl;
                if (is_rat_square(r)) {
                    Vec x = scale(rat_sqrt(r), es[k - 1]->u);
                    for (std::size_t m = 0; m + 1 < k; ++m) x = add(x, scale(a[m], es[m]->u));
                    return x;
                }
            }
        }
        std::size_t j = a.size();
        bool carry = true;
        while (carry && j > 0) {
            --j;
            if (++a[j] <= height) carry = false;
            else a[j] = -height;
        }
        if (carry) return std::nullopt;
    }
}

struct Found {
    std::vector<std::size_t> idx;
    Vec v;
};

std::optional<Found> search_subsets(const std::vector<Entry>& res, long height) {
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < res.size(); ++i)
        if (res[i].f != 0) nz.push_back(i);
    const std::size_t m = nz.size();
    for (std::size_t size = 2; size <= 4 && size <= m; ++size) {
        long h = size == 4 ? std::min<long>(height, 6) : height;
        std::vector<std::size_t> cur(size);
        for (std::size_t i = 0; i < size; ++i) cur[i] = i;
        for (;;) {
            std::vector<const Entry*> es;
            for (auto c : cur) es.push_back(&res[nz[c]]);
            if (auto v = isotropic_in(es, h)) {
                Found f;
                for (auto c : cur) f.idx.push_back(nz[c]);
                f.v = *v;
                return f;
            }
            std::size_t i = size;
            while (i > 0 && cur[i - 1] == m - size + (i - 1)) --i;
            if (i == 0) break;
            ++cur[i - 1];
            for (std::size_t j = i; j < size; ++j) cur[j] = cur[j - 1] + 1;
        }
    }
    return std::nullopt;
}

std::vector<Entry> diagonal_entries(const QuadForm& q) {
    auto dg = congruence_diagonalize(q);
    std::vector<Entry> res;
    for (std::size_t j = 0; j < q.n(); ++j) {
        Entry e{dg.u.col(j), dg.d(j, j)};
        normalize(e);
        res.push_back(std::move(e));
    }
    return res;
}

}  // namespace

Mat HyperbolicSplit::basis() const {
    std::vector<Vec> rows;
    for (const auto& [v, w] : pairs) {
        rows.push_back(v);
        rows.push_back(w);
    }
    for (const auto& r : residual_basis) rows.push_back(r);
    std::size_t n = rows.empty() ? 0 : rows.front().size();
    return Mat::from_rows(rows, n);
}

std::optional<IntVec> isotropic_vector(const QuadForm& q, long height) {
    auto res = diagonal_entries(q);
    for (const auto& e : res)
        if (e.f == 0) return primitive(e.u);
    if (auto f = search_subsets(res, height)) return primitive(f->v);
    return std::nullopt;
}

HyperbolicSplit split_hyperbolic(const QuadForm& q, long height) {
    HyperbolicSplit out;
    auto res = diagonal_entries(q);
    while (auto found = search_subsets(res, height)) {
        Vec v = to_vec(primitive(found->v));
        std::vector<Entry> span;
        for (auto i : found->idx) span.push_back(res[i]);
        // partner: y in the span with b(v, y) != 0, then w = y / b(v, y) - (Q(.)/2) v
        Vec w;
        for (const auto& e : span) {
            Rat bv = bilinear(q, v, e.u);
            if (bv == 0) continue;
            w = scale(1 / bv, e.u);
            w = sub(w, scale(eval_form(q, w) / 2, v));
            break;
        }
        auto rest = complement(q, span, v, w);
        std::vector<Entry> next;
        for (std::size_t i = 0; i < res.size(); ++i)
            if (std::find(found->idx.begin(), found->idx.end(), i) == found->idx.end()) next.push_back(res[i]);
        for (auto& e : rest) {
            normalize(e);
            next.push_back(std::move(e));
        }
        res = std::move(next);
        out.pairs.emplace_back(std::move(v), std::move(w));
    }
    Vec diag;
    for (const auto& e : res) {
        out.residual_basis.push_back(e.u);
        diag.push_back(e.f);
    }
    out.residual_form = QuadForm::diagonal(diag);
    return out;
}

bool verify_split(const QuadForm& q, const HyperbolicSplit& s) {
    Mat b = s.basis();
    if (b.rows() != q.n() || b.cols() != q.n() || rank(b) != q.n()) return false;
    QuadForm g = congruence(q, b);
    const std::size_t h = 2 * s.pairs.size();
    if (s.residual_form.n() != q.n() - h) return false;
    for (std::size_t i = 0; i < q.n(); ++i)
        for (std::size_t j = 0; j < q.n(); ++j) {
            Rat expect = 0;
            if (i < h && j < h) {
                if (i / 2 == j / 2 && i != j) expect = 1;
            } else if (i >= h && j >= h) {
                expect = s.residual_form(i - h, j - h);
            }
            if (g(i, j) != expect) return false;
        }
    return true;
}

LinearSpace perp_space(const QuadForm& q3, const LinearSpace& l) {
    if (l.n() != q3.n()) throw DimensionMismatch("plane and form differ in dimension");
    auto ker = kernel(l.basis() * q3.gram());
    if (ker.empty()) throw PreconditionViolated("perpendicular space is zero");
    return LinearSpace::from_rows(ker, q3.n());
}

QuadForm restrict_form(const QuadForm& q, const LinearSpace& l) {
    if (l.n() != q.n()) throw DimensionMismatch("plane and form differ in dimension");
    return congruence(q, l.basis());
}

bool contains_in_quadric(const QuadForm& q, const LinearSpace& l) { return restrict_form(q, l).gram().is_zero(); }

LinearSpace integral_basis(const LinearSpace& l) {
    auto basis = lll_reduce(saturated_basis(l.basis().row_list(), l.n()));
    std::vector<Vec> rows;
    for (const auto& b : basis) rows.push_back(to_vec(b));
    return LinearSpace::from_rows(rows, l.n());
}

namespace {

// Whether two binary quadratic forms (as 2x2 grams) have no common zero over the closure.
bool no_common_zero_binary(const QuadForm& a, const QuadForm& b) {
    if (a.gram().is_zero() || b.gram().is_zero()) return false;
    // coefficients of X^2, XY, Y^2
    auto co = [](const QuadForm& q) { return std::vector<Rat>{q(0, 0), 2 * q(0, 1), q(1, 1)}; };
    auto f = co(a), g = co(b);
    Mat syl(4, 4);
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 3; ++i) {
            syl(r, r + i) = f[i];
            syl(2 + r, r + i) = g[i];
        }
    return det(syl) != 0;
}

}  // namespace

AdmissibilityReport is_admissible(const LinearSpace& l, const QuadSystem& s, const PlaneOptions& opts) {
    if (l.n() != s.n()) throw DimensionMismatch("plane and system differ in dimension");
    AdmissibilityReport rep;
    rep.contained_in_q3 = contains_in_quadric(s[2], l);
    if (!rep.contained_in_q3) {
        rep.reason = "containment";
        return rep;
    }
    QuadForm qa = restrict_form(s[0], l), qb = restrict_form(s[1], l);
    auto pv = pair_nonsingular(qa, qb);
    rep.pair_disc = pv.witness;
    if (l.t() == 0) rep.vacuous = !(qa(0, 0) == 0 && qb(0, 0) == 0);
    else if (l.t() == 1) rep.vacuous = no_common_zero_binary(qa, qb);
    if (!pv.nonsingular) {
        rep.reason = "pair_singular";
        return rep;
    }
    LinearSpace w = integral_basis(perp_space(s[2], l));
    QuadSystem sw(restrict_form(s[0], w), restrict_form(s[1], w), restrict_form(s[2], w));
    SweepOptions so;
    so.workers = opts.workers;
    so.exempt_third_radical = true;
    for (u64 p : opts.ff_primes) {
        auto sweep = triple_nonsingular_ff(sw, p, opts.budget, so);
        if (sweep.verdict == SweepVerdict::budget_exceeded) {
            rep.skipped_primes.push_back(p);
            continue;
        }
        bool bad = sweep.verdict == SweepVerdict::singular_witness;
        rep.perp_system_sweeps.push_back(std::move(sweep));
        if (bad) {
            rep.reason = "perp_singular_mod_p";
            return rep;
        }
    }
    if (rep.perp_system_sweeps.empty()) throw BudgetExceeded("every perpendicular-system sweep exceeds the point budget");
    rep.verdict = Verdict::admissible;
    return rep;
}

std::vector<Vec> isotropic_points_in_perp(const QuadForm& q3, const LinearSpace& l, const std::vector<Vec>& isotropic) {
    if (isotropic.empty()) return {};
    const std::size_t k = isotropic.size(), d = l.dim();
    Mat c(d, k);
    for (std::size_t j = 0; j < d; ++j) {
        Vec lj = l.basis().row(j);
        for (std::size_t i = 0; i < k; ++i) c(j, i) = bilinear(q3, isotropic[i], lj);
    }
    // reduced integer kernel keeps the combinations short
    auto ker = integer_kernel(c);
    if (ker.size() > 1) ker = lll_reduce(std::move(ker));
    std::vector<Vec> out;
    for (const auto& a : ker) {
        Vec x(q3.n());
        for (std::size_t i = 0; i < k; ++i)
            if (a[i] != 0) x = add(x, scale(Rat(a[i]), isotropic[i]));
        if (is_zero(x) || l.contains(x)) continue;
        out.push_back(to_vec(primitive(x)));
    }
    return out;
}

std::optional<Vec> isotropic_point_outside(const QuadForm& q3, const LinearSpace& l, const std::vector<Vec>& isotropic,
                                           long height) {
    auto cands = isotropic_points_in_perp(q3, l, isotropic);
    if (!cands.empty()) return cands.front();
    const std::size_t n = q3.n();
    LinearSpace w = integral_basis(perp_space(q3, l));
    // complement of l inside w; q3 restricted to w has l in its radical
    std::vector<Vec> rows = l.basis().row_list(), comp;
    for (std::size_t r = 0; r < w.dim(); ++r) {
        rows.push_back(w.basis().row(r));
        if (rank(Mat::from_rows(rows, n)) == rows.size()) comp.push_back(rows.back());
        else rows.pop_back();
    }
    if (comp.empty()) return std::nullopt;
    LinearSpace c = LinearSpace::from_rows(comp, n);
    auto z = isotropic_vector(restrict_form(q3, c), height);
    if (!z) return std::nullopt;
    return to_vec(primitive(c.point(to_vec(*z))));
}

Vec stereographic_point(const QuadForm& q, const Vec& b, const Vec& d) {
    return sub(scale(eval_form(q, d), b), scale(2 * bilinear(q, b, d), d));
}

Extension extend_plane(const LinearSpace& l, const QuadSystem& s, const std::vector<Vec>& isotropic, long height,
                       std::uint64_t seed, std::size_t max_tries, const PlaneOptions& opts) {
    if (l.t() > 6) throw PreconditionViolated("plane extension needs t <= 6");
    const QuadForm& q3 = s[2];
    const std::size_t n = s.n();
    auto cands = isotropic_points_in_perp(q3, l, isotropic);
    LinearSpace w = integral_basis(perp_space(q3, l));
    Rng rng(seed);
    Vec base = cands.empty() ? isotropic_point_outside(q3, l, {}, height).value_or(Vec{}) : cands.front();
    std::size_t tries = 0;
    for (std::size_t attempt = 0; tries < max_tries && attempt < 20 * max_tries + 20; ++attempt) {
        Vec x;
        if (attempt < cands.size()) {
            x = cands[attempt];
        } else {
            if (base.empty()) break;
            long h = std::min<long>(height, 1 + static_cast<long>(attempt / 10));
            Vec d(n);
            for (std::size_t r = 0; r < w.dim(); ++r) d = add(d, scale(rng.uniform(-h, h), w.basis().row(r)));
            if (is_zero(d)) continue;
            x = stereographic_point(q3, base, d);
        }
        if (is_zero(x) || l.contains(x)) continue;
        ++tries;
        auto rows = l.basis().row_list();
        rows.push_back(to_vec(primitive(x)));
        LinearSpace next = LinearSpace::from_rows(rows, n);
        auto rep = is_admissible(next, s, opts);
        if (rep.verdict == Verdict::admissible) return {next, rep, tries};
    }
    throw BudgetExceeded("no admissible extension of the " + std::to_string(l.t()) + "-plane within max_tries");
}

namespace {

std::vector<Vec> isotropic_from_split(const QuadForm& q3, long height) {
    std::vector<Vec> iso;
    for (const auto& pr : split_hyperbolic(q3, height).pairs) iso.push_back(pr.first);
    return iso;
}

}  // namespace

Extension extend_plane(const LinearSpace& l, const QuadSystem& s, long height, std::uint64_t seed,
                       std::size_t max_tries, const PlaneOptions& opts) {
    return extend_plane(l, s, isotropic_from_split(s[2], height), height, seed, max_tries, opts);
}

ChainResult chain_admissible_check(const LinearSpace& l, const QuadSystem& s, const std::vector<Vec>& isotropic,
                                   std::uint64_t seed, long height, std::size_t max_tries, const PlaneOptions& opts) {
    if (l.t() < 3 || l.t() > 7) throw PreconditionViolated("chain check needs 3 <= t <= 7");
    ChainResult out;
    auto rep = is_admissible(l, s, opts);
    if (rep.verdict != Verdict::admissible) {
        out.failure = "start plane not admissible: " + rep.reason;
        return out;
    }
    out.chain.push_back(l);
    out.reports.push_back(rep);
    Rng rng(seed);
    while (out.chain.back().t() < 7) {
        try {
            auto ext = extend_plane(out.chain.back(), s, isotropic, height, rng.next(), max_tries, opts);
            out.chain.push_back(ext.plane);
            out.reports.push_back(ext.report);
        } catch (const BudgetExceeded& e) {
            out.failure = e.what();
            return out;
        }
    }
    out.verdict = true;
    return out;
}

ChainResult chain_admissible_check(const LinearSpace& l, const QuadSystem& s, std::uint64_t seed, long height,
                                   std::size_t max_tries, const PlaneOptions& opts) {
    return chain_admissible_check(l, s, isotropic_from_split(s[2], height), seed, height, max_tries, opts);
}

}  // namespace tq
