// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tq/descent.hpp"
#include "tq/fano.hpp"
#include "tq/json_io.hpp"
#include "tq/local.hpp"
#include "tq/pencil.hpp"
#include "tq/planes.hpp"

using namespace tq;

namespace {

std::string fixture(const std::string& name) { return std::string(TQ_FIXTURES) + "/" + name; }

DescentInput load_input() { return from_json<DescentInput>(read_json_file(fixture("f19_input.json"))); }

DescentCertificate load_certificate() {
    return from_json<DescentCertificate>(read_json_file(fixture("f19_certificate.json")));
}

// Collects failures for one criterion; `detail` ends up on the summary line.
struct Check {
    int failures = 0;
    std::ostringstream first;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures++ == 0) first << what;
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<void(Check&)> body;
};

// ---- 1 ----

Rat closed_form(long n, long t) { return Rat(t + 1) * (Rat(n - 2) - Rat(3 * t) / 2); }

long unrolled(long n, long t) {
    long total = 0;
    for (; t > 0; n -= 2, --t) total += n - 2 - t;
    return total + n - 2;
}

void fano_consistency(Check& c) {
    long cases = 0;
    for (long n = 3; n <= 25; ++n)
        for (long t = 0; t <= n - 2; ++t)
            for (long r = 2 * t + 2; r <= std::min(n, 2 * n - 2 * t - 2); ++r) {
                Rat cf = closed_form(n, t);
                const std::string at = "(" + std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(r) + ")";
                c.expect(cf.get_den() == 1 && cf.get_num() == unrolled(n, t), "closed form vs recursion at " + at);
                auto d = fano_dim({n, t, r});
                c.expect(d && *d == unrolled(n, t), "fano_dim at " + at);
                ++cases;
            }
    c.detail << cases << " triples";
}

// ---- 2 ----

QuadForm split_form(std::size_t n) {
    Mat a(n, n);
    for (std::size_t i = 0; i + 1 < n; i += 2) a(i, i + 1) = a(i + 1, i) = Rat(1, 2);
    if (n % 2) a(n - 1, n - 1) = 1;
    return QuadForm(a);
}

void fano_oracle(Check& c) {
    std::vector<CountRecord> lines;
    for (u64 p : {3, 5, 7}) {
        CountRecord r = count_planes_ff(split_form(4), p, 1, {4, 100000000});
        c.expect(r.count == 2 * (p + 1), "n=4 count at p=" + std::to_string(p));
        c.expect(r.count == oracle::brute_plane_count(split_form(4), p, 1), "n=4 brute force at p=" + std::to_string(p));
        lines.push_back(r);
        c.detail << r.count << " ";
    }
    long d4 = fit_count_degree(lines);
    c.expect(d4 == 1 && d4 == *fano_dim({4, 1, 4}), "n=4 fitted degree");
    std::vector<CountRecord> five;
    for (u64 p : {3, 5}) five.push_back(count_planes_ff(split_form(5), p, 1, {4, 100000000}));
    long d5 = fit_count_degree(five);
    c.expect(d5 == 3 && d5 == *fano_dim({5, 1, 5}), "n=5 fitted degree " + std::to_string(d5));
    c.detail << "fit(4)=" << d4 << " fit(5)=" << d5;
}

// ---- 3 ----

std::vector<Rat> poly_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a[0] / b[0];
        for (std::size_t i = 0; i < b.size(); ++i) a[i] -= f * b[i];
        a.erase(a.begin());
    }
    while (!a.empty() && a[0] == 0) a.erase(a.begin());
    return a;
}

std::vector<Rat> trim(std::vector<Rat> a) {
    while (!a.empty() && a[0] == 0) a.erase(a.begin());
    return a;
}

// Coefficients of det(X A + Y B) (X^m first) by Lagrange interpolation of
// det(A + j B) at j = 0..m with Leibniz determinants.
std::vector<Rat> det_poly(const QuadForm& a, const QuadForm& b) {
    const std::size_t m = a.n();
    std::vector<Rat> coeffs(m + 1);  // ascending in j
    for (std::size_t k = 0; k <= m; ++k) {
        Rat yk = oracle::leibniz_det(a.gram() + Rat(static_cast<long>(k)) * b.gram());
        std::vector<Rat> basis{1};
        Rat denom = 1;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == k) continue;
            std::vector<Rat> next(basis.size() + 1);
            for (std::size_t e = 0; e < basis.size(); ++e) {
                next[e + 1] += basis[e];
                next[e] -= Rat(static_cast<long>(i)) * basis[e];
            }
            basis = next;
            denom *= Rat(static_cast<long>(k) - static_cast<long>(i));
        }
        for (std::size_t e = 0; e < basis.size(); ++e) coeffs[e] += yk * basis[e] / denom;
    }
    return coeffs;  // coefficient of X^(m-e) Y^e
}

// Whether the binary form has a repeated linear factor over the closure (or vanishes).
bool singular_by_oracle(const std::vector<Rat>& asc) {
    const std::size_t m = asc.size() - 1;
    std::vector<Rat> g(asc.rbegin(), asc.rend());  // highest power of Y first
    g = trim(g);
    if (g.empty()) return true;
    if (g.size() + 1 < m + 1) return true;  // X^2 divides
    if (g.size() <= 1) return false;
    std::vector<Rat> dg;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) dg.push_back(g[i] * static_cast<long>(g.size() - 1 - i));
    std::vector<Rat> x = g, y = trim(dg);
    while (!y.empty()) {
        auto r = poly_rem(x, y);
        x = y;
        y = r;
    }
    return x.size() > 1;
}

QuadForm disguise(const QuadForm& q, const Mat& u) { return QuadForm(u.transpose() * q.gram() * u); }

std::pair<QuadForm, QuadForm> planted_singular_pair(Rng& rng, std::size_t m) {
    Mat a = oracle::random_symmetric(rng, m, 3, false);
    a(0, 0) = 0;
    Mat bp = oracle::random_symmetric(rng, m, 3, false);
    for (std::size_t i = 0; i < m; ++i) bp(0, i) = bp(i, 0) = 0;
    Rat lambda(rng.uniform(-3, 3), rng.uniform(1, 2));
    lambda.canonicalize();
    Mat b = bp + (-lambda) * a;
    Mat u;
    do {
        u = oracle::random_mat(rng, m, m, 2, true);
    } while (det(u) == 0);
    return {disguise(QuadForm(a), u), disguise(QuadForm(b), u)};
}

// A common zero v of both forms with A v, B v dependent, from the kernel of
// x A + y B at a repeated rational root. Empty when no rational point exists
// in that kernel at small height.
std::optional<Vec> singular_witness(const QuadForm& a, const QuadForm& b) {
    BinaryForm f = det_form_pencil(a, b);
    if (f.is_zero()) return std::nullopt;
    for (const auto& [x, y] : rational_roots(f)) {
        Mat m = x * a.gram() + y * b.gram();
        auto ker = kernel(m);
        if (ker.empty()) continue;
        std::optional<Vec> v;
        if (ker.size() == 1) {
            v = ker[0];
        } else {
            LinearSpace k = LinearSpace::from_rows(ker, a.n());
            auto z = isotropic_vector(restrict_form(a, k), 4);
            if (!z) continue;
            auto rows = k.basis().row_list();
            v = Vec(a.n());
            for (std::size_t i = 0; i < rows.size(); ++i) *v = add(*v, scale(Rat((*z)[i]), rows[i]));
        }
        if (eval_form(a, *v) == 0 && eval_form(b, *v) == 0) return v;
    }
    return std::nullopt;
}

bool gradients_dependent(const QuadForm& a, const QuadForm& b, const Vec& v) {
    Vec ga = a.gram() * v, gb = b.gram() * v;
    return rank(Mat::from_rows({ga, gb}, v.size())) <= 1;
}

void pair_soundness(Check& c) {
    Rng rng(2024);
    int singular = 0, witnessed = 0, irrational = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 4);
        QuadForm a(oracle::random_symmetric(rng, m, 3, false)), b(oracle::random_symmetric(rng, m, 3, false));
        PairVerdict v = pair_nonsingular(a, b);
        const bool oracle_singular = singular_by_oracle(det_poly(a, b));
        c.expect(v.nonsingular == !oracle_singular, "random pair " + std::to_string(trial) + " disagrees with oracle");
        if (v.nonsingular) continue;
        ++singular;
        BinaryForm f = det_form_pencil(a, b);
        if (f.is_zero()) continue;
        // witness required whenever a rational root has a kernel of dimension one
        bool has_rational_root = !rational_roots(f).empty();
        if (auto w = singular_witness(a, b)) {
            ++witnessed;
            c.expect(gradients_dependent(a, b, *w), "random witness gradients");
        } else if (has_rational_root) {
            ++irrational;
        }
    }
    int planted_ok = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 4);
        auto [a, b] = planted_singular_pair(rng, m);
        PairVerdict v = pair_nonsingular(a, b);
        c.expect(!v.nonsingular && v.witness == 0, "planted pair " + std::to_string(trial) + " certified nonsingular");
        auto w = singular_witness(a, b);
        c.expect(w.has_value(), "planted pair " + std::to_string(trial) + " without witness");
        if (w) {
            c.expect(gradients_dependent(a, b, *w), "planted witness gradients");
            Rat x, y;
            for (const auto& [rx, ry] : rational_roots(det_form_pencil(a, b))) {
                Mat mm = rx * a.gram() + ry * b.gram();
                if (rank(mm) <= m - 1) {
                    x = rx;
                    y = ry;
                }
            }
            c.expect(rank(x * a.gram() + y * b.gram()) <= m - 1, "planted root rank");
            ++planted_ok;
        }
    }
    c.detail << "random singular " << singular << " (witnessed " << witnessed << ", no rational witness "
             << irrational << "), planted " << planted_ok << "/50";
}

// ---- 4 ----

void hensel_contract(Check& c) {
    Rng rng(77);
    int lifted = 0, attempts = 0;
    while (lifted < 100 && attempts < 400) {
        const u64 p = std::vector<u64>{11, 13, 37, 41}[static_cast<std::size_t>(attempts % 4)];
        ++attempts;
        const std::size_t n = 3 + static_cast<std::size_t>(attempts % 4);
        QuadForm q(oracle::random_symmetric(rng, n, 5, false));
        PolySystem g = PolySystem::from_forms({q});
        auto sp = smooth_point_mod_p(g, p, 1000000, static_cast<std::uint64_t>(attempts));
        if (!sp.point) continue;
        IntVec x0;
        for (u64 v : sp.point->coords) x0.push_back(Int(static_cast<unsigned long>(v)));
        HenselReport rep = hensel_lift_report(g, make_padic(p, 1, x0), 50);
        const Int mod = pow_int(Int(static_cast<unsigned long>(p)), 50);
        c.expect(rep.point.precision >= 50, "precision below 50");
        // congruence Q(P) = 0 mod p^50, recomputed from the Gram matrix
        Rat val = eval_form(q, to_vec(rep.point.coords));
        c.expect(val.get_den() % Int(static_cast<unsigned long>(p)) != 0, "denominator divisible by p");
        c.expect(mod_positive(val.get_num(), mod) == 0, "congruence fails mod p^50");
        // |P - P0|_p <= delta / |Delta|_p
        const long bound = std::min(rep.v_residual - rep.v_delta, 50L);
        for (std::size_t i = 0; i < n; ++i)
            c.expect(valuation(Int(rep.point.coords[i] - x0[i]), Int(static_cast<unsigned long>(p))) >= bound,
                     "distance bound fails");
        ++lifted;
    }
    c.expect(lifted == 100, "only " + std::to_string(lifted) + " quadrics with smooth points");
    c.detail << lifted << " lifts";
}

// ---- 5 ----

bool split_gram_ok(const QuadForm& q, const HyperbolicSplit& s) {
    std::vector<Vec> rows;
    for (const auto& [v, w] : s.pairs) {
        rows.push_back(v);
        rows.push_back(w);
    }
    for (const auto& r : s.residual_basis) rows.push_back(r);
    const std::size_t n = q.n();
    if (rows.size() != n) return false;
    Mat b = Mat::from_rows(rows, n);
    if ((n <= 6 ? oracle::leibniz_det(b) : det(b)) == 0) return false;
    Mat g = b * q.gram() * b.transpose();
    const std::size_t h = 2 * s.pairs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat want;
            if (i < h && j < h) want = (i / 2 == j / 2 && i != j) ? 1 : 0;
            else if (i >= h && j >= h) want = s.residual_form(i - h, j - h);
            if (g(i, j) != want) return false;
        }
    return true;
}

void witt_exactness(Check& c) {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 10);
        QuadForm q(oracle::random_symmetric(rng, n, 3, trial % 2 == 0));
        c.expect(split_gram_ok(q, split_hyperbolic(q, 4)), "random form " + std::to_string(trial));
    }
    std::vector<std::pair<std::string, QuadForm>> forms;
    for (const char* f : {"split4.json", "split5.json", "circle.json", "anisotropic3.json"})
        forms.push_back({f, from_json<QuadForm>(read_json_file(fixture(f)))});
    QuadSystem f19 = from_json<QuadSystem>(read_json_file(fixture("f19_system.json")));
    for (std::size_t i = 0; i < 3; ++i) forms.push_back({"f19_system Q" + std::to_string(i + 1), f19[i]});
    DescentCertificate cert = load_certificate();
    for (std::size_t i = 0; i < 3; ++i) forms.push_back({"certificate adjusted Q" + std::to_string(i + 1), cert.adjusted[i]});
    for (const auto& [name, q] : forms) c.expect(split_gram_ok(q, split_hyperbolic(q, 6)), "fixture " + name);

    DescentInput in = load_input();
    Preprocessed pre = preprocess(in.system, in.seed, in.budgets);
    c.expect(split_gram_ok(pre.adjusted[2], pre.split), "adjusted F19 split");
    c.expect(pre.split.witt_index() >= 7, "adjusted F19 Witt index below 7");
    c.detail << "100 random + " << forms.size() << " fixture forms, F19 Witt index " << pre.split.witt_index();
}

// ---- 6 ----

Rat sup_distance(const IntVec& x, const Vec& t) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (abs(t[i]) > abs(t[j])) j = i;
    if (x[j] == 0) return 1000;
    Rat d = 0;
    for (std::size_t i = 0; i < t.size(); ++i) d = std::max(d, Rat(abs(Rat(x[i]) / x[j] - t[i] / t[j])));
    return d;
}

// x = lambda t mod p^k for a p-adic unit lambda, via 2x2 minors.
bool projectively_congruent(const IntVec& x, const IntVec& t, u64 p, unsigned k) {
    const Int pp(static_cast<unsigned long>(p));
    const Int m = pow_int(pp, k);
    std::size_t j = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] % pp != 0) {
            j = i;
            break;
        }
    if (j == t.size() || x[j] % pp == 0) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (mod_positive(Int(x[i] * t[j] - x[j] * t[i]), m) != 0) return false;
    return true;
}

bool check_targets(Check& c, const QuadForm& q, const IntVec& x, const std::vector<LocalTarget>& targets,
                   const std::string& label) {
    bool ok = eval_form(q, to_vec(x)) == 0;
    c.expect(ok, label + ": Q(x) != 0");
    for (const auto& t : targets) {
        bool hit = t.place.real ? sup_distance(x, t.real_point) <= t.eps
                                : projectively_congruent(x, t.padic.coords, t.place.p, t.k);
        c.expect(hit, label + ": target at " + t.place.name() + " missed");
        ok = ok && hit;
    }
    return ok;
}

void weak_approximation(Check& c) {
    Rng rng(66);
    int done = 0;
    for (int trial = 0; trial < 25; ++trial) {
        Vec d{1, -1};
        for (int i = 0; i < 1 + trial % 4; ++i) d.push_back(rng.uniform(1, 5) * (rng.uniform(0, 1) ? 1 : -1));
        QuadForm q = QuadForm::diagonal(d);
        const std::size_t n = d.size();
        Vec base(n, 0);
        base[0] = base[1] = 1;
        PolySystem f = PolySystem::from_forms({q});
        std::vector<long double> x0(n, 0.3L);
        x0[0] = 1;
        for (std::size_t i = 1; i < n; ++i) x0[i] += 0.1L * static_cast<long double>(rng.uniform(-2, 2));
        Vec real = from_real(newton_refine_real(f, x0, 60));
        const u64 p = std::vector<u64>{3, 5, 7, 11, 13}[static_cast<std::size_t>(trial % 5)];
        auto sp = smooth_point_mod_p(f, p, 100000, static_cast<std::uint64_t>(trial) + 1);
        if (!sp.point) {
            c.expect(false, "instance " + std::to_string(trial) + " has no smooth point mod p");
            continue;
        }
        IntVec s;
        for (u64 v : sp.point->coords) s.push_back(Int(static_cast<unsigned long>(v)));
        const unsigned k = 1 + static_cast<unsigned>(trial % 3);
        PadicApprox pa = hensel_lift(f, make_padic(p, 1, s), k);
        std::vector<LocalTarget> targets{LocalTarget::real_target(real, Rat(1, 20)), LocalTarget::finite_target(pa, k)};
        try {
            IntVec x = weak_approx_quadric(q, base, targets, pow_int(Int(10), 300), static_cast<std::uint64_t>(trial));
            if (check_targets(c, q, x, targets, "instance " + std::to_string(trial))) ++done;
        } catch (const Error& e) {
            c.expect(false, "instance " + std::to_string(trial) + ": " + e.what());
        }
    }
    QuadForm circle = QuadForm::diagonal({1, 1, -1});
    std::vector<LocalTarget> ct{LocalTarget::real_target({Rat(3, 5), Rat(4, 5), 1}, Rat(1, 10)),
                                LocalTarget::finite_target(make_padic(7, 1, {1, 0, 1}), 1)};
    IntVec x = weak_approx_quadric(circle, {1, 0, 1}, ct, pow_int(Int(10), 40), 1);
    check_targets(c, circle, x, ct, "circle");
    c.detail << done << "/25 instances, circle point (" << x[0] << "," << x[1] << "," << x[2] << ")";
}

// ---- 7 ----

void end_to_end(Check& c) {
    DescentInput in = load_input();
    const auto t0 = std::chrono::steady_clock::now();
    DescentCertificate cert = run_descent(in, 4);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    VerifyReport rep = verify_certificate(cert, in, true, 4);
    c.expect(rep.ok, "verify_certificate: " + rep.failing_claim + " " + rep.detail);
    c.expect(cert.chain.size() == 5, "chain length");
    for (std::size_t i = 0; i < cert.chain.size(); ++i) c.expect(cert.chain[i].t() == 3 + i, "chain dimension");
    bool f3 = false;
    for (const auto& sw : cert.reports.front().perp_system_sweeps)
        if (sw.p == 3) {
            f3 = true;
            c.expect(sw.verdict == SweepVerdict::no_witness, "F3 sweep verdict");
            c.expect(sw.points <= 100000000, "F3 sweep over budget");
            c.detail << "F3 sweep " << sw.points << " points, ";
        }
    c.expect(f3, "no F3 sweep of the 3-plane perp system");
    c.expect(secs <= 1800, "descent slower than 30 min");
    Vec e1(in.system.n(), 0);
    e1[0] = 1;
    const bool planted_in_l7 = cert.chain.back().contains(e1);
    if (planted_in_l7) c.expect(cert.final_point.has_value(), "planted point lies in L7 but no final point");
    c.detail << "descent " << static_cast<int>(secs) << " s, planted point in L7: " << (planted_in_l7 ? "yes" : "no")
             << ", final point: " << (cert.final_point ? "found" : "none");
}

// ---- 8 ----

struct Tamper {
    std::string claim;
    std::function<void(DescentCertificate&)> apply;
};

std::vector<Tamper> tampers(const DescentInput& in) {
    const std::size_t n = in.system.n();
    std::vector<Tamper> t;
    t.push_back({"input.dimension", [](auto& c) { c.n += 1; }});
    t.push_back({"hypotheses", [](auto& c) { c.n_at_least_19 = !c.n_at_least_19; }});
    t.push_back({"generators.shape", [](auto& c) { c.generators.m1.pop_back(); }});
    t.push_back({"generators.d1_m3", [](auto& c) { c.generators.d1_m3 += 1; }});
    t.push_back({"generators.d2_m1m2", [](auto& c) { c.generators.d2_m1m2 *= 2; }});
    t.push_back({"generators.d2_m1m3", [](auto& c) { c.generators.d2_m1m3 = -c.generators.d2_m1m3; }});
    t.push_back({"generators.det_m", [](auto& c) { c.generators.det_m += 1; }});
    t.push_back({"adjusted_system", [](auto& c) { c.c += 1; }});
    t.push_back({"adjusted_system", [](auto& c) {
                     c.adjusted = QuadSystem(c.adjusted[0], c.adjusted[0] + c.adjusted[1], c.adjusted[2]);
                 }});
    t.push_back({"c_signature", [](auto& c) { c.c_signature.n_plus += 1; }});
    t.push_back({"split.gram", [](auto& c) { c.split.pairs[0].second = scale(2, c.split.pairs[0].second); }});
    t.push_back({"split.witt_index", [](auto& c) {
                     // fold hyperbolic pairs into the residual until the index drops below 7
                     while (c.split.witt_index() >= 7) {
                         auto [v, w] = c.split.pairs.back();
                         c.split.pairs.pop_back();
                         c.split.residual_basis.insert(c.split.residual_basis.begin(), {v, w});
                     }
                     Mat r = Mat::from_rows(c.split.residual_basis, c.adjusted.n());
                     c.split.residual_form = QuadForm(r * c.adjusted[2].gram() * r.transpose());
                 }});
    t.push_back({"chain.length", [](auto& c) { c.chain.pop_back(); }});
    t.push_back({"chain.dimension", [](auto& c) { c.chain[2] = c.chain[1]; }});
    t.push_back({"chain.nesting", [n](auto& c) {
                     // a 4-plane inside L5 that misses part of L3
                     auto rows = c.chain[2].basis().row_list();
                     for (std::size_t drop = 0; drop < rows.size(); ++drop) {
                         std::vector<Vec> keep;
                         for (std::size_t i = 0; i < rows.size(); ++i)
                             if (i != drop) keep.push_back(rows[i]);
                         LinearSpace l = LinearSpace::from_rows(keep, n);
                         if (!l.contains(c.chain[0])) {
                             c.chain[1] = l;
                             return;
                         }
                     }
                 }});
    t.push_back({"chain.containment", [n](auto& c) {
                     auto rows = c.chain[3].basis().row_list();
                     for (std::size_t i = 0; i < n; ++i) {
                         Vec e(n, 0);
                         e[i] = 1;
                         if (eval_form(c.adjusted[2], e) != 0 && !c.chain[3].contains(e)) {
                             rows.push_back(e);
                             break;
                         }
                     }
                     c.chain[4] = LinearSpace::from_rows(rows, n);
                 }});
    t.push_back({"chain.pair_disc", [](auto& c) { c.reports[0].pair_disc += 1; }});
    t.push_back({"chain.sweep_record", [](auto& c) { c.reports[2].verdict = Verdict::not_admissible; }});
    t.push_back({"disc_primes", [](auto& c) { c.disc_cofactor += 1; }});
    t.push_back({"completeness", [](auto& c) { c.local_witnesses.pop_back(); }});
    t.push_back({"local_witness.real", [](auto& c) {
                     for (auto& w : c.local_witnesses)
                         if (w.place.real) w.coords[0] += 1;
                 }});
    t.push_back({"final_point", [n](auto& c) {
                     c.final_point = IntVec(n, 1);
                 }});
    return t;
}

void tamper_detection(Check& c) {
    DescentInput in = load_input();
    DescentCertificate cert = load_certificate();
    c.expect(verify_certificate(cert, in).ok, "untampered certificate rejected");
    auto list = tampers(in);
    int caught = 0;
    for (const auto& t : list) {
        DescentCertificate bad = cert;
        t.apply(bad);
        VerifyReport r = verify_certificate(bad, in);
        const bool ok = !r.ok && r.failing_claim == t.claim;
        c.expect(ok, "expected " + t.claim + ", got " + (r.ok ? "accepted" : r.failing_claim));
        caught += ok;
    }
    c.expect(list.size() >= 20, "fewer than 20 tampers");
    c.detail << caught << "/" << list.size() << " tampers rejected with the expected claim";
}

// ---- 9 ----

void determinism(Check& c) {
    DescentInput in = load_input();
    const std::string a = dump(to_json(run_descent(in, 1)));
    const std::string b = dump(to_json(run_descent(in, 4)));
    const std::string b2 = dump(to_json(run_descent(in, 4)));
    c.expect(a == b, "workers 1 and 4 differ");
    c.expect(b == b2, "repeated run differs");
    c.detail << a.size() << " bytes";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "fano formula consistency", 1, fano_consistency},
        {2, "fano oracle agreement", 120, fano_oracle},
        {3, "pair certification soundness", 60, pair_soundness},
        {4, "hensel contract", 60, hensel_contract},
        {5, "witt splitting exactness", 120, witt_exactness},
        {6, "weak approximation", 60, weak_approximation},
        {7, "end-to-end F19 descent", 1800, end_to_end},
        {8, "tamper detection", 10, tamper_detection},
        {9, "determinism across worker counts", 0, determinism},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit_s > 0 && secs > cr.limit_s) c.expect(false, "runtime over " + std::to_string(cr.limit_s) + " s");
        const bool ok = c.failures == 0;
        failed += !ok;
        std::printf("%s criterion %d (%s): %s [%.2f s]%s%s\n", ok ? "PASS" : "FAIL", cr.id, cr.name,
                    c.detail.str().c_str(), secs, ok ? "" : " first failure: ", c.first.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
