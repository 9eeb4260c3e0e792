#include "tq/descent.hpp"

#include <algorithm>
#include <set>

#include "tq/lattice.hpp"
#include "tq/random.hpp"

namespace tq {

namespace {

constexpr u64 kSmallPrimeBound = 37;
constexpr unsigned kTPrecision = 3;

std::size_t ceil_half(std::size_t x) { return (x + 1) / 2; }
std::size_t min_signature(std::size_t n) { return n >= 2 ? ceil_half(n - 2) : 0; }
std::size_t min_witt(std::size_t n) { return n >= 5 ? (n - 5) / 2 : 0; }

PolySystem full_system(const QuadSystem& s) { return PolySystem::from_forms({s[0], s[1], s[2]}); }

PolySystem pair_system(const QuadSystem& s, const LinearSpace& l) {
    return PolySystem::from_forms({restrict_form(s[0], l), restrict_form(s[1], l)});
}

std::vector<Vec> split_isotropic(const HyperbolicSplit& sp) {
    std::vector<Vec> iso;
    for (const auto& pr : sp.pairs) iso.push_back(pr.first);
    return iso;
}

PlaneOptions plane_options(const DescentInput& in, unsigned workers) {
    PlaneOptions o;
    o.ff_primes = in.ff_primes;
    o.budget = in.budgets.sweep_points;
    o.workers = workers;
    return o;
}

Rat effective_eps(const DescentInput& in, const LocalTarget& t) { return std::min(in.epsilon, t.eps); }

std::set<u64> finite_places(const DescentInput& in) {
    std::set<u64> out;
    for (const auto& t : in.targets)
        if (!t.place.real) out.insert(t.place.p);
    return out;
}

bool covers_small_primes(const DescentInput& in) {
    bool real = false;
    for (const auto& t : in.targets) real = real || t.place.real;
    auto fin = finite_places(in);
    for (u64 p : primes_up_to(kSmallPrimeBound))
        if (!fin.count(p)) return false;
    return real;
}

IntVec int_row(const LinearSpace& l, std::size_t r) {
    IntVec out;
    for (const auto& x : l.basis().row(r)) {
        if (x.get_den() != 1) throw Malformed("plane basis is not integral");
        out.push_back(x.get_num());
    }
    return out;
}

IntVec ambient_mod(const LinearSpace& l, const IntVec& c, const Int& m) {
    IntVec y(l.n(), 0);
    for (std::size_t k = 0; k < l.dim(); ++k) {
        IntVec row = int_row(l, k);
        for (std::size_t i = 0; i < l.n(); ++i) y[i] += c[k] * row[i];
    }
    for (auto& v : y) v = mod_positive(v, m);
    return y;
}

long min_minor_valuation(const PolySystem& f, const IntVec& c, u64 p) {
    Mat j = f.jacobian(to_vec(c));
    long best = kInfiniteValuation;
    Int pp(static_cast<unsigned long>(p));
    for (std::size_t a = 0; a < f.nvars; ++a)
        for (std::size_t b = a + 1; b < f.nvars; ++b) {
            Rat d = j(0, a) * j(1, b) - j(0, b) * j(1, a);
            best = std::min(best, valuation(d, pp));
        }
    return best;
}

bool has_unit(const IntVec& y, u64 p) {
    Int pp(static_cast<unsigned long>(p));
    return std::any_of(y.begin(), y.end(), [&](const Int& v) { return mod_positive(v, pp) != 0; });
}

// Empty when the witness holds.
std::string check_finite_witness(const QuadSystem& s, const LinearSpace& l, const LocalWitness& w,
                                 const LocalTarget* target) {
    const u64 p = w.place.p;
    const auto& c = w.padic_coords;
    if (c.p != p || w.padic_point.p != p || c.precision != w.padic_point.precision) return "precision records differ";
    if (c.coords.size() != l.dim() || w.padic_point.coords.size() != l.n()) return "wrong coordinate count";
    const Int m = c.modulus();
    if (ambient_mod(l, c.coords, m) != w.padic_point.coords) return "ambient point does not match plane coordinates";
    if (!has_unit(w.padic_point.coords, p)) return "point is not primitive";
    PolySystem f = pair_system(s, l).integral();
    for (const auto& eq : f.eqs)
        if (eq.eval_mod(c.coords, m) != 0) return "not a zero of the restricted pair mod p^K";
    long vd = min_minor_valuation(f, c.coords, p);
    if (2 * vd >= static_cast<long>(c.precision)) return "Hensel condition fails";
    if (target) {
        if (static_cast<long>(c.precision) - vd < static_cast<long>(target->k)) return "lifted zero not determined to precision k";
        if (!projectively_congruent(w.padic_point.coords, target->padic, target->k)) return "not congruent to the target";
    }
    return {};
}

Rat abs_row_sum_max(const LinearSpace& l) {
    Rat best = 0;
    for (std::size_t i = 0; i < l.n(); ++i) {
        Rat s = 0;
        for (std::size_t k = 0; k < l.dim(); ++k) s += abs(l.basis()(k, i));
        best = std::max(best, s);
    }
    return best;
}

std::size_t max_abs_index(const Vec& t) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (abs(t[i]) > abs(t[j])) j = i;
    return j;
}

std::string check_real_witness(const QuadSystem& s, const LinearSpace& l, const LocalWitness& w, const LocalTarget* target,
                               const Rat& tol) {
    if (w.coords.size() != l.dim() || w.point.size() != l.n()) return "wrong coordinate count";
    if (l.point(w.coords) != w.point) return "ambient point does not match plane coordinates";
    auto k = kantorovich_check(pair_system(s, l), w.coords);
    if (!k.ok) return "Kantorovich condition fails";
    if (k.radius != w.radius) return "radius does not match the recomputed certificate";
    if (!target) return {};
    const Rat r = k.radius * abs_row_sum_max(l);
    const std::size_t j = max_abs_index(target->real_point);
    const Rat yj = abs(w.point[j]);
    if (yj <= r) return "normalizing coordinate not bounded away from zero";
    Rat bound = 0;
    for (std::size_t i = 0; i < l.n(); ++i) bound = std::max(bound, Rat(r * (yj + abs(w.point[i])) / (yj * (yj - r))));
    if (projective_distance(w.point, target->real_point) + bound >= tol) return "farther than epsilon/2 from the target";
    return {};
}

std::optional<LocalWitness> make_real_witness(const QuadSystem& s, const LinearSpace& l, const LocalTarget& t,
                                              const Rat& tol) {
    PolySystem f = pair_system(s, l);
    std::vector<long double> c0(l.dim(), 0);
    c0[0] = 1;
    LocalWitness w;
    w.place = Place::infinite();
    try {
        w.coords = from_real(newton_refine_real(f, c0, 60));
    } catch (const Error&) {
        return std::nullopt;
    }
    w.point = l.point(w.coords);
    w.radius = kantorovich_check(f, w.coords).radius;
    if (!check_real_witness(s, l, w, &t, tol).empty()) return std::nullopt;
    return w;
}

std::optional<LocalWitness> make_finite_witness(const QuadSystem& s, const LinearSpace& l, u64 p, unsigned precision,
                                                std::size_t start, const LocalTarget* t) {
    PolySystem f = pair_system(s, l).integral();
    IntVec c0(l.dim(), 0);
    c0[start] = 1;
    LocalWitness w;
    w.place = Place::prime(p);
    try {
        w.padic_coords = hensel_lift(f, make_padic(p, precision, c0), precision);
        w.padic_point = make_padic(p, precision, ambient_mod(l, w.padic_coords.coords, w.padic_coords.modulus()));
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!check_finite_witness(s, l, w, t).empty()) return std::nullopt;
    return w;
}

// Rationals ordered by height, zero first.
std::vector<Rat> c_candidates(std::size_t count) {
    std::vector<Rat> out{Rat(0)};
    for (long h = 1; out.size() < count; ++h)
        for (long b = 1; b <= h && out.size() < count; ++b)
            for (long a = 1; a <= h && out.size() < count; ++a) {
                if (std::max(a, b) != h) continue;
                Int g;
                mpz_gcd_ui(g.get_mpz_t(), Int(a).get_mpz_t(), static_cast<unsigned long>(b));
                if (g != 1) continue;
                out.push_back(Rat(a, b));
                if (out.size() < count) out.push_back(Rat(-a, b));
            }
    return out;
}

// Random rational point of q3 orthogonal to the rows and outside their span.
std::optional<Vec> random_perp_point(const QuadForm& q3, const std::vector<Vec>& rows, const std::vector<Vec>& iso,
                                     Rng& rng, long height) {
    const std::size_t n = q3.n();
    LinearSpace m = LinearSpace::from_rows(rows, n);
    auto base = isotropic_point_outside(q3, m, iso, height);
    if (!base) return std::nullopt;
    LinearSpace w = integral_basis(perp_space(q3, m));
    for (int attempt = 0; attempt < 50; ++attempt) {
        long h = 1 + attempt / 10;
        Vec d(n);
        for (std::size_t r = 0; r < w.dim(); ++r) d = add(d, scale(rng.uniform(-h, h), w.basis().row(r)));
        if (is_zero(d)) continue;
        Vec x = stereographic_point(q3, *base, d);
        if (is_zero(x) || m.contains(x)) continue;
        return to_vec(primitive(x));
    }
    return std::nullopt;
}

Int power_of_ten(unsigned digits) { return pow_int(Int(10), digits); }

}  // namespace

Rat projective_distance(const Vec& x, const Vec& target) {
    if (x.size() != target.size()) throw DimensionMismatch("point dimension mismatch");
    const std::size_t j = max_abs_index(target);
    if (target[j] == 0) throw PreconditionViolated("target is the zero vector");
    if (x[j] == 0) throw PreconditionViolated("point vanishes at the target's normalizing coordinate");
    Rat best = 0;
    for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, Rat(abs(x[i] / x[j] - target[i] / target[j])));
    return best;
}

Preprocessed preprocess(const QuadSystem& s, std::uint64_t seed, const DescentBudgets& b) {
    Preprocessed out;
    const std::size_t n = s.n();
    out.generators = select_generators(s, seed, b.generator_tries);
    QuadSystem g = apply_generators(s, out.generators);
    bool found = false;
    for (const Rat& c : c_candidates(b.c_candidates)) {
        QuadForm q3 = c * g[0] + g[2];
        if (det(q3.gram()) == 0) continue;
        Signature sig = signature_real(q3);
        if (std::min(sig.n_plus, sig.n_minus) < min_signature(n)) continue;
        out.c = c;
        out.c_signature = sig;
        out.adjusted = QuadSystem(g[0], g[1], q3);
        found = true;
        break;
    }
    if (!found)
        throw BudgetExceeded("no c among " + std::to_string(b.c_candidates) +
                             " candidates makes c*Q1+Q3 nonsingular with min(n+, n-) >= " +
                             std::to_string(min_signature(n)));
    out.split = split_hyperbolic(out.adjusted[2], b.split_height);
    if (out.split.witt_index() < min_witt(n))
        throw PreconditionViolated("hyperbolic splitting reached Witt index " + std::to_string(out.split.witt_index()) +
                                   ", short of " + std::to_string(min_witt(n)));
    return out;
}

void validate_input(const DescentInput& in) {
    const std::size_t n = in.system.n();
    if (in.epsilon <= 0) throw PreconditionViolated("epsilon must be positive");
    std::set<std::string> seen;
    PolySystem integral = full_system(in.system).integral();
    for (const auto& t : in.targets) {
        if (!seen.insert(t.place.name()).second) throw PreconditionViolated("two targets at place " + t.place.name());
        if (t.place.real) {
            if (t.real_point.size() != n) throw DimensionMismatch("real target has the wrong dimension");
            if (t.eps <= 0) throw PreconditionViolated("real target tolerance must be positive");
            const std::size_t j = max_abs_index(t.real_point);
            if (t.real_point[j] == 0) throw PreconditionViolated("real target is the zero vector");
            Vec x = scale(1 / abs(t.real_point[j]), t.real_point);
            for (std::size_t i = 0; i < 3; ++i) {
                Rat mass = 0;
                const auto& a = in.system[i].gram();
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < n; ++c) mass += abs(a(r, c));
                if (abs(eval_form(in.system[i], x)) > 4 * t.eps * mass)
                    throw PreconditionViolated("real target is not on all three quadrics");
            }
        } else {
            if (t.padic.coords.size() != n) throw DimensionMismatch("p-adic target has the wrong dimension");
            if (t.k == 0 || t.padic.precision < t.k) throw PreconditionViolated("p-adic target known below precision k");
            if (!has_unit(t.padic.coords, t.place.p)) throw PreconditionViolated("p-adic target is not primitive");
            for (const auto& eq : integral.eqs)
                if (eq.eval_mod(t.padic.coords, t.padic.modulus()) != 0)
                    throw PreconditionViolated("p-adic target at " + t.place.name() + " is not on all three quadrics");
        }
    }
}

PlaneResult find_chain_admissible_3plane(const DescentInput& in, const Preprocessed& pre, unsigned workers) {
    const QuadSystem& s = pre.adjusted;
    const std::size_t n = s.n();
    const auto& b = in.budgets;
    if (pre.split.pairs.empty()) throw PreconditionViolated("third form has no rational isotropic vector");
    PlaneOptions opts = plane_options(in, workers);
    PolySystem full = full_system(s);

    // sharper local data: e0 is aimed well inside the tolerances so that
    // nearby zeros on the plane still meet them
    std::vector<LocalTarget> tight;
    for (const auto& t : in.targets) {
        if (t.place.real) {
            Rat eps = effective_eps(in, t);
            Vec x = t.real_point;
            try {
                Vec r = from_real(newton_refine_real(full, to_real(x), 40));
                if (projective_distance(r, x) < eps / 4096) x = r;
            } catch (const Error&) {
            }
            tight.push_back(LocalTarget::real_target(x, eps / 1024));
        } else {
            unsigned k = t.k + b.padic_extra;
            PadicApprox lifted = hensel_lift(full, t.padic, k);
            if (!projectively_congruent(lifted.coords, t.padic, t.k))
                throw PreconditionViolated("p-adic target at " + t.place.name() + " moves under lifting");
            tight.push_back(LocalTarget::finite_target(lifted, k));
        }
    }
    // rational targets that already satisfy everything serve as e0 directly
    std::vector<IntVec> direct;
    for (const auto& t : in.targets) {
        IntVec z = primitive(t.place.real ? t.real_point : to_vec(t.padic.coords));
        if (eval_form(s[2], to_vec(z)) != 0) continue;
        if (std::all_of(tight.begin(), tight.end(), [&](const LocalTarget& u) { return target_satisfied(z, u); }))
            direct.push_back(z);
    }

    const std::vector<Vec> iso = split_isotropic(pre.split);
    // stereographic bases: isotropic split vectors, the ones far from
    // orthogonal to the real target first
    std::vector<Vec> bases;
    for (const auto& [v, w] : pre.split.pairs) {
        bases.push_back(to_vec(primitive(v)));
        bases.push_back(to_vec(primitive(w)));
    }
    auto finite_cost = [&](const Vec& v) {
        long cost = 0;
        for (const auto& t : tight) {
            if (t.place.real) continue;
            Rat bv = 2 * bilinear(s[2], v, to_vec(t.padic.coords));
            cost += std::min<long>(valuation(residue(bv, t.padic.modulus()), Int(static_cast<unsigned long>(t.place.p))),
                                   t.padic.precision);
        }
        return cost;
    };
    auto real_score = [&](const Vec& v) {
        Rat best = 0;
        for (const auto& t : tight) {
            if (!t.place.real) continue;
            Rat top = 0;
            for (const auto& x : v) top = std::max(top, Rat(abs(x)));
            best = abs(bilinear(s[2], v, t.real_point)) / top;
        }
        return best;
    };
    std::stable_sort(bases.begin(), bases.end(), [&](const Vec& a, const Vec& c) {
        long fa = finite_cost(a), fc = finite_cost(c);
        if (fa != fc) return fa < fc;
        return real_score(a) > real_score(c);
    });
    const Int hb = power_of_ten(b.approx_height_digits);
    Rng rng(in.seed ^ 0x3C6EF372FE94F82BULL);
    std::string last;
    auto note = [&](const std::string& stage) { last += (last.empty() ? "" : "; ") + stage; };
    for (std::size_t attempt = 0; attempt < b.plane_tries; ++attempt) {
        const std::uint64_t aseed = rng.next();
        IntVec e0;
        if (attempt < direct.size()) {
            e0 = direct[attempt];
        } else {
            // later attempts start from fresh rational points of Q3 near the best base
            Vec base = bases.front();
            if (attempt > direct.size()) {
                Rng br(aseed);
                for (int i = 0; i < 20; ++i) {
                    Vec d(n);
                    for (auto& v : d) v = br.uniform(-1, 1);
                    Vec x = stereographic_point(s[2], bases.front(), d);
                    if (is_zero(x)) continue;
                    x = to_vec(primitive(x));
                    if (finite_cost(x) <= finite_cost(bases.front()) && real_score(x) > 0) {
                        base = x;
                        break;
                    }
                }
            }
            try {
                e0 = weak_approx_quadric(s[2], base, tight, hb, aseed);
            } catch (const BudgetExceeded& e) {
                note(std::string("approximation: ") + e.what());
                continue;
            }
        }
        std::vector<Vec> rows{to_vec(e0)};
        Rng local(aseed);
        for (int i = 1; i <= 3; ++i) {
            auto x = random_perp_point(s[2], rows, iso, local, b.split_height);
            if (!x) break;
            rows.push_back(*x);
        }
        if (rows.size() != 4) {
            note("basis completion");
            continue;
        }
        LinearSpace l3 = LinearSpace::from_rows(rows, n);
        AdmissibilityReport rep = is_admissible(l3, s, opts);
        if (rep.verdict != Verdict::admissible) {
            note("3-plane admissibility: " + rep.reason);
            continue;
        }
        std::vector<LocalWitness> ws;
        for (const auto& t : in.targets) {
            std::optional<LocalWitness> w;
            if (t.place.real) w = make_real_witness(s, l3, t, effective_eps(in, t) / 2);
            else w = make_finite_witness(s, l3, t.place.p, t.k + b.padic_extra, 0, &t);
            if (!w) break;
            ws.push_back(std::move(*w));
        }
        if (ws.size() != in.targets.size()) {
            note("local witness at " + in.targets[ws.size()].place.name());
            continue;
        }
        ChainResult chain = chain_admissible_check(l3, s, iso, aseed, b.split_height, b.extend_tries, opts);
        if (!chain.verdict) {
            note("chain: " + chain.failure);
            continue;
        }
        return {l3, rep, std::move(chain), std::move(ws), attempt + 1};
    }
    throw BudgetExceeded("no chain-admissible 3-plane with local witnesses in " + std::to_string(b.plane_tries) +
                         " attempts; failing stages: " + last);
}

TExtension extend_for_T(const LinearSpace& l3, const Preprocessed& pre, const DescentInput& in,
                        const std::vector<std::pair<u64, bool>>& t, unsigned workers) {
    if (t.empty()) return {l3, {}};
    const QuadSystem& s = pre.adjusted;
    const std::size_t n = s.n();
    const auto& b = in.budgets;
    auto fin = finite_places(in);
    for (const auto& [p, forced] : t) {
        if (!is_prime(p)) throw PreconditionViolated("T place " + std::to_string(p) + " is not prime");
        if (p < kSmallPrimeBound) throw PreconditionViolated("T place " + std::to_string(p) + " is below 37");
        if (fin.count(p)) throw PreconditionViolated("T place " + std::to_string(p) + " is a target place");
    }
    LinearSpace w = integral_basis(perp_space(s[2], l3));
    QuadForm w1 = restrict_form(s[0], w), w2 = restrict_form(s[1], w), w3 = restrict_form(s[2], w);
    PolySystem sw = PolySystem::from_forms({w1, w2, w3});
    PlaneOptions opts = plane_options(in, workers);
    const std::vector<Vec> iso = split_isotropic(pre.split);
    const Int hb = power_of_ten(b.approx_height_digits);
    const unsigned k = kTPrecision + 2;
    Rng rng(in.seed ^ 0xA54FF53A5F1D36F1ULL);
    for (std::size_t attempt = 0; attempt < b.extend_tries; ++attempt) {
        std::vector<LocalTarget> targets;
        for (const auto& [p, forced] : t) {
            auto sp = smooth_point_mod_p(sw, p, b.smooth_point_budget, rng.next());
            if (!sp.point)
                throw Error("no smooth point mod " + std::to_string(p) +
                            " on the perpendicular system; input is outside the hypothesis");
            IntVec c;
            for (u64 v : sp.point->coords) c.push_back(Int(static_cast<unsigned long>(v)));
            targets.push_back(LocalTarget::finite_target(hensel_lift(sw, make_padic(p, 1, c), k), k));
        }
        auto base = isotropic_point_outside(s[2], l3, iso, b.split_height);
        if (!base) throw BudgetExceeded("no rational point of Q3 orthogonal to the 3-plane");
        Vec base_w;
        if (!solve(w.basis().transpose(), *base, base_w)) throw Error("base point outside the perpendicular space");
        IntVec xw;
        try {
            xw = weak_approx_quadric(w3, base_w, targets, hb, rng.next());
        } catch (const BudgetExceeded&) {
            continue;
        }
        Vec x = w.point(to_vec(xw));
        if (l3.contains(x)) continue;
        auto rows = l3.basis().row_list();
        rows.push_back(to_vec(primitive(x)));
        LinearSpace l4 = LinearSpace::from_rows(rows, n);
        if (is_admissible(l4, s, opts).verdict != Verdict::admissible) continue;
        TExtension out{l4, {}};
        for (const auto& [p, forced] : t) {
            auto wit = make_finite_witness(s, l4, p, kTPrecision, 4, nullptr);
            if (!wit) break;
            out.records.push_back({p, forced, primitive(x), std::move(*wit)});
        }
        if (out.records.size() == t.size()) return out;
    }
    throw BudgetExceeded("no 4-plane with points at every place of T in " + std::to_string(b.extend_tries) + " attempts");
}

ChainResult extend_to_7plane(const LinearSpace& l, const Preprocessed& pre, std::uint64_t seed,
                             const DescentBudgets& b, const PlaneOptions& opts) {
    auto ch = chain_admissible_check(l, pre.adjusted, split_isotropic(pre.split), seed, b.split_height, b.extend_tries,
                                     opts);
    if (!ch.verdict)
        throw BudgetExceeded("extension stopped at t = " +
                             std::to_string(ch.chain.empty() ? l.t() : ch.chain.back().t()) + ": " + ch.failure);
    return ch;
}

std::optional<IntVec> final_point_search(const QuadSystem& s, const LinearSpace& l7, long height, u64 max_points) {
    if (height <= 0) return std::nullopt;
    LinearSpace lb = integral_basis(l7);
    const std::size_t k = lb.dim(), n = lb.n();
    std::vector<IntVec> rows;
    for (std::size_t r = 0; r < k; ++r) rows.push_back(int_row(lb, r));
    std::array<std::vector<std::vector<Int>>, 3> g;
    for (std::size_t i = 0; i < 3; ++i) g[i] = primitive_integer_gram2(restrict_form(s[i], lb));
    auto value = [&](std::size_t i, const IntVec& c) {
        Int acc = 0;
        for (std::size_t a = 0; a < k; ++a) {
            if (c[a] == 0) continue;
            Int row = 0;
            for (std::size_t b = 0; b < k; ++b)
                if (c[b] != 0) row += g[i][a][b] * c[b];
            acc += c[a] * row;
        }
        return acc;
    };
    const Int bound(height);
    u64 scanned = 0;
    for (long r = 1; scanned < max_points; ++r) {
        IntVec c(k, Int(-r));
        for (;;) {
            long top = 0;
            long lead = 0;
            for (const auto& v : c) {
                long a = std::labs(v.get_si());
                top = std::max(top, a);
                if (lead == 0 && v != 0) lead = v.get_si();
            }
            if (top == r && lead > 0) {
                if (++scanned > max_points) return std::nullopt;
                if (value(0, c) == 0 && value(1, c) == 0 && value(2, c) == 0) {
                    Vec y(n);
                    for (std::size_t a = 0; a < k; ++a) y = add(y, scale(Rat(c[a]), to_vec(rows[a])));
                    IntVec z = primitive(y);
                    bool on = eval_form(s[0], to_vec(z)) == 0 && eval_form(s[1], to_vec(z)) == 0 &&
                              eval_form(s[2], to_vec(z)) == 0;
                    if (on && tq::height(z) <= bound) return z;
                }
            }
            std::size_t j = k;
            bool carry = true;
            while (carry && j > 0) {
                --j;
                if (c[j] < r) {
                    c[j] += 1;
                    carry = false;
                } else {
                    c[j] = -r;
                }
            }
            if (carry) break;
        }
    }
    return std::nullopt;
}

DescentCertificate run_descent(const DescentInput& in, unsigned workers) {
    validate_input(in);
    const std::size_t n = in.system.n();
    Preprocessed pre = preprocess(in.system, in.seed, in.budgets);
    PlaneResult pr = find_chain_admissible_3plane(in, pre, workers);

    DescentCertificate cert;
    cert.n = n;
    cert.n_at_least_19 = n >= 19;
    cert.s_covers_small_primes = covers_small_primes(in);
    cert.seed = in.seed;
    cert.generators = pre.generators;
    cert.c = pre.c;
    cert.c_signature = pre.c_signature;
    cert.adjusted = pre.adjusted;
    cert.split = pre.split;
    cert.local_witnesses = pr.witnesses;
    cert.plane_attempts = pr.attempts;

    // T: primes >= 37 outside the targets where the 3-plane pair may lack points
    const auto fin = finite_places(in);
    std::vector<std::pair<u64, bool>> t;
    PolySystem f3 = pair_system(pre.adjusted, pr.plane).integral();
    Rat disc = pr.report.pair_disc;
    Int whole = abs(Int(disc.get_num() * disc.get_den()));
    auto pf = trial_factor(whole, 100000);
    cert.disc_cofactor = pf.cofactor;
    Rng trng(in.seed ^ 0x510E527FADE682D1ULL);
    for (const auto& [q, e] : pf.factors) {
        u64 p = q.get_ui();
        if (p < kSmallPrimeBound || fin.count(p)) continue;
        cert.disc_primes.push_back(p);
        if (!smooth_point_mod_p(f3, p, in.budgets.smooth_point_budget, trng.next()).point) t.emplace_back(p, false);
    }
    for (u64 p : in.forced_t)
        if (std::none_of(t.begin(), t.end(), [&](const auto& x) { return x.first == p; })) t.emplace_back(p, true);
    std::sort(t.begin(), t.end());

    if (t.empty()) {
        cert.chain = pr.chain.chain;
        cert.reports = pr.chain.reports;
    } else {
        TExtension ext = extend_for_T(pr.plane, pre, in, t, workers);
        cert.t_record = ext.records;
        ChainResult ch = extend_to_7plane(ext.plane, pre, in.seed ^ 0x1F83D9ABFB41BD6BULL, in.budgets,
                                          plane_options(in, workers));
        cert.chain.push_back(pr.plane);
        cert.reports.push_back(pr.report);
        cert.chain.insert(cert.chain.end(), ch.chain.begin(), ch.chain.end());
        cert.reports.insert(cert.reports.end(), ch.reports.begin(), ch.reports.end());
    }
    cert.final_height_bound = in.budgets.final_height;
    cert.final_point = final_point_search(in.system, cert.chain.back(), in.budgets.final_height, in.budgets.final_points);
    return cert;
}

VerifyReport verify_certificate(const DescentCertificate& cert, const DescentInput& in, bool rerun_sweeps,
                                unsigned workers) {
    auto fail = [](std::string claim, std::string detail) { return VerifyReport{false, std::move(claim), std::move(detail)}; };
    const QuadSystem& s0 = in.system;
    const std::size_t n = s0.n();
    if (cert.n != n) return fail("input.dimension", "certificate n differs from the input system");
    if (cert.n_at_least_19 != (n >= 19) || cert.s_covers_small_primes != covers_small_primes(in))
        return fail("hypotheses", "hypothesis flags do not match the input");

    const auto& g = cert.generators;
    if (g.m1.size() != 3 || g.m2.size() != 3 || g.m3.size() != 3) return fail("generators.shape", "generator vectors need 3 entries");
    Rat d1 = d1_value(s0, g.m3);
    if (d1 == 0 || d1 != g.d1_m3) return fail("generators.d1_m3", "recomputed " + to_string(d1));
    Rat d12 = d2_value(s0, g.m1, g.m2);
    if (d12 == 0 || d12 != g.d2_m1m2) return fail("generators.d2_m1m2", "recomputed " + to_string(d12));
    Rat d13 = d2_value(s0, g.m1, g.m3);
    if (d13 == 0 || d13 != g.d2_m1m3) return fail("generators.d2_m1m3", "recomputed " + to_string(d13));
    Mat m = Mat::from_rows({g.m1, g.m2, g.m3}, 3);
    Rat dm = det(m);
    if (dm == 0 || dm != g.det_m) return fail("generators.det_m", "recomputed " + to_string(dm));

    QuadSystem gs = apply_generators(s0, g);
    QuadSystem adj(gs[0], gs[1], cert.c * gs[0] + gs[2]);
    if (!(adj == cert.adjusted)) return fail("adjusted_system", "adjusted system does not follow from generators and c");
    const QuadForm& q3 = adj[2];
    if (det(q3.gram()) == 0) return fail("c_signature", "c*Q1+Q3 is singular");
    Signature sig = signature_real(q3);
    if (!(sig == cert.c_signature)) return fail("c_signature", "recorded signature differs");
    if (std::min(sig.n_plus, sig.n_minus) < min_signature(n)) return fail("c_signature", "real isotropy too small");

    if (cert.split.pairs.empty() && cert.split.residual_basis.empty()) return fail("split.gram", "empty splitting");
    for (const auto& [v, w] : cert.split.pairs)
        if (v.size() != n || w.size() != n) return fail("split.gram", "split vector of wrong length");
    for (const auto& r : cert.split.residual_basis)
        if (r.size() != n) return fail("split.gram", "residual vector of wrong length");
    if (!verify_split(q3, cert.split)) return fail("split.gram", "Gram matrix in the split basis is not hyperbolic plus residual");
    if (cert.split.witt_index() < min_witt(n)) return fail("split.witt_index", "Witt index below floor((n-5)/2)");

    if (cert.chain.size() != 5 || cert.reports.size() != 5) return fail("chain.length", "chain must run from t = 3 to 7");
    PlaneOptions opts = plane_options(in, workers);
    for (std::size_t i = 0; i < 5; ++i) {
        const LinearSpace& l = cert.chain[i];
        const auto& rep = cert.reports[i];
        if (l.n() != n || l.t() != 3 + i || rank(l.basis()) != l.dim())
            return fail("chain.dimension", "link " + std::to_string(i) + " has the wrong shape");
        if (i > 0 && !l.contains(cert.chain[i - 1]))
            return fail("chain.nesting", "link " + std::to_string(i) + " does not contain the previous one");
        if (!contains_in_quadric(q3, l)) return fail("chain.containment", "link " + std::to_string(i) + " is not in Q3");
        auto pv = pair_nonsingular(restrict_form(adj[0], l), restrict_form(adj[1], l));
        if (!pv.nonsingular || pv.witness != rep.pair_disc)
            return fail("chain.pair_disc", "link " + std::to_string(i) + " recomputed " + to_string(pv.witness));
        if (rep.verdict != Verdict::admissible || !rep.contained_in_q3 || rep.perp_system_sweeps.empty())
            return fail("chain.sweep_record", "link " + std::to_string(i) + " lacks an admissible report");
        for (const auto& sw : rep.perp_system_sweeps)
            if (sw.verdict != SweepVerdict::no_witness)
                return fail("chain.sweep_record", "link " + std::to_string(i) + " records a singular sweep");
        if (rerun_sweeps) {
            auto again = is_admissible(l, adj, opts);
            if (again.perp_system_sweeps != rep.perp_system_sweeps || again.skipped_primes != rep.skipped_primes)
                return fail("chain.sweep", "link " + std::to_string(i) + " sweeps do not reproduce");
        }
    }

    const LinearSpace& l3 = cert.chain.front();
    {
        const Rat& pd = cert.reports.front().pair_disc;
        const Int m = abs(pd.get_num() * pd.get_den());
        for (u64 p : cert.disc_primes)
            if (p < kSmallPrimeBound || !is_prime(p) || m % Int(static_cast<unsigned long>(p)) != 0)
                return fail("disc_primes", std::to_string(p) + " is not a prime >= 37 dividing the 3-plane discriminant");
        if (cert.disc_cofactor <= 0 || m % cert.disc_cofactor != 0)
            return fail("disc_primes", "cofactor does not divide the 3-plane discriminant");
        for (const auto& r : cert.t_record)
            if (!r.forced && std::find(cert.disc_primes.begin(), cert.disc_primes.end(), r.p) == cert.disc_primes.end())
                return fail("disc_primes", "T place " + std::to_string(r.p) + " is not among the tested primes");
    }
    for (const auto& t : in.targets) {
        auto hits = std::count_if(cert.local_witnesses.begin(), cert.local_witnesses.end(),
                                  [&](const LocalWitness& w) { return w.place == t.place; });
        if (hits != 1) return fail("completeness", "place " + t.place.name() + " needs exactly one witness");
    }
    if (cert.local_witnesses.size() != in.targets.size()) return fail("completeness", "witness for an undeclared place");
    for (const auto& w : cert.local_witnesses) {
        const LocalTarget& t = *std::find_if(in.targets.begin(), in.targets.end(),
                                             [&](const LocalTarget& x) { return x.place == w.place; });
        std::string why = w.place.real ? check_real_witness(adj, l3, w, &t, effective_eps(in, t) / 2)
                                       : check_finite_witness(adj, l3, w, &t);
        if (!why.empty()) return fail("local_witness." + w.place.name(), why);
    }

    const auto fin = finite_places(in);
    for (const auto& r : cert.t_record) {
        std::string claim = "t_record." + std::to_string(r.p);
        if (r.p < kSmallPrimeBound || fin.count(r.p) || r.witness.place.real || r.witness.place.p != r.p)
            return fail(claim, "place not allowed in T");
        if (r.extension.size() != n) return fail(claim, "extension vector of wrong length");
        auto rows = l3.basis().row_list();
        rows.push_back(to_vec(r.extension));
        if (rank(Mat::from_rows(rows, n)) != 5 || !(LinearSpace::from_rows(rows, n).contains(cert.chain[1])))
            return fail(claim, "4-plane is not the 3-plane plus the extension vector");
        std::string why = check_finite_witness(adj, cert.chain[1], r.witness, nullptr);
        if (!why.empty()) return fail(claim, why);
    }

    if (cert.final_point) {
        const IntVec& y = *cert.final_point;
        if (y.size() != n || std::all_of(y.begin(), y.end(), [](const Int& v) { return v == 0; }))
            return fail("final_point", "malformed point");
        for (std::size_t i = 0; i < 3; ++i)
            if (eval_form(s0[i], to_vec(y)) != 0) return fail("final_point", "not on Q" + std::to_string(i + 1));
        if (!cert.chain.back().contains(to_vec(y))) return fail("final_point", "not in the 7-plane");
        if (tq::height(y) > Int(cert.final_height_bound)) return fail("final_point", "height above the recorded bound");
    }
    return {};
}

}  // namespace tq
