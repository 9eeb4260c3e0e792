#include "tq/json_io.hpp"

#include <fstream>
#include <sstream>

namespace tq {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Malformed&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw Malformed(std::string(what) + ": " + e.what());
    } catch (const Error& e) {
        throw Malformed(std::string(what) + ": " + e.what());
    } catch (const std::logic_error& e) {
        throw Malformed(std::string(what) + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw Malformed(std::string("expected an object holding '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw Malformed(std::string("missing field '") + key + "'");
    return *it;
}

Rat rat_of(const Json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
    throw Malformed("rational must be a string or an integer");
}

Int int_of(const Json& j) {
    Rat r = rat_of(j);
    if (r.get_den() != 1) throw Malformed("expected an integer, got " + to_string(r));
    return r.get_num();
}

u64 u64_of(const Json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw Malformed("expected a non-negative integer");
    return j.get<u64>();
}

Vec vec_of(const Json& j) {
    if (!j.is_array()) throw Malformed("expected an array of rationals");
    Vec v;
    for (const auto& x : j) v.push_back(rat_of(x));
    return v;
}

IntVec intvec_of(const Json& j) {
    if (!j.is_array()) throw Malformed("expected an array of integers");
    IntVec v;
    for (const auto& x : j) v.push_back(int_of(x));
    return v;
}

Mat mat_of(const Json& j, std::size_t cols) {
    if (!j.is_array()) throw Malformed("expected a matrix");
    std::vector<Vec> rows;
    for (const auto& r : j) {
        rows.push_back(vec_of(r));
        if (rows.back().size() != cols) throw Malformed("matrix row has the wrong length");
    }
    return Mat::from_rows(rows, cols);
}

Json mat_json(const Mat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
    return rows;
}

std::size_t size_of(const Json& j, const char* key) { return static_cast<std::size_t>(u64_of(field(j, key))); }

const char* verdict_name(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::no_witness: return "no_witness";
        case SweepVerdict::singular_witness: return "singular_witness";
        case SweepVerdict::budget_exceeded: return "budget_exceeded";
    }
    return "no_witness";
}

SweepVerdict verdict_of(const std::string& s) {
    if (s == "no_witness") return SweepVerdict::no_witness;
    if (s == "singular_witness") return SweepVerdict::singular_witness;
    if (s == "budget_exceeded") return SweepVerdict::budget_exceeded;
    throw Malformed("unknown sweep verdict '" + s + "'");
}

std::vector<u64> u64s_of(const Json& j) {
    if (!j.is_array()) throw Malformed("expected an array of integers");
    std::vector<u64> out;
    for (const auto& x : j) out.push_back(u64_of(x));
    return out;
}

}  // namespace

Json to_json(const Rat& r) { return to_string(r); }
Json to_json(const Int& z) { return to_string(z); }

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

Json to_json(const IntVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

Json to_json(const QuadForm& q) { return {{"n", q.n()}, {"gram", mat_json(q.gram())}}; }

Json to_json(const QuadSystem& s) {
    return {{"n", s.n()}, {"forms", {to_json(s[0]), to_json(s[1]), to_json(s[2])}}};
}

Json to_json(const LinearSpace& l) { return {{"n", l.n()}, {"t", l.t()}, {"basis", mat_json(l.basis())}}; }

Json to_json(const FFPoint& p) { return {{"p", p.p}, {"coords", p.coords}}; }

Json to_json(const PadicApprox& p) {
    return {{"p", p.p}, {"precision", p.precision}, {"coords", to_json(p.coords)}};
}

Json to_json(const Place& p) { return p.real ? Json("real") : Json(p.p); }

Json to_json(const LocalTarget& t) {
    Json j{{"place", to_json(t.place)}};
    if (t.place.real) {
        j["point"] = to_json(t.real_point);
        j["eps"] = to_json(t.eps);
    } else {
        j["padic"] = to_json(t.padic);
        j["k"] = t.k;
    }
    return j;
}

Json to_json(const Signature& s) { return {{"n_plus", s.n_plus}, {"n_minus", s.n_minus}, {"n_zero", s.n_zero}}; }

Json to_json(const GeneratorTriple& g) {
    return {{"m1", to_json(g.m1)},           {"m2", to_json(g.m2)},           {"m3", to_json(g.m3)},
            {"d1_m3", to_json(g.d1_m3)},     {"d2_m1m2", to_json(g.d2_m1m2)}, {"d2_m1m3", to_json(g.d2_m1m3)},
            {"det_m", to_json(g.det_m)},     {"tries", g.tries}};
}

Json to_json(const HyperbolicSplit& s) {
    Json pairs = Json::array();
    for (const auto& [v, w] : s.pairs) pairs.push_back({{"v", to_json(v)}, {"w", to_json(w)}});
    Json res = Json::array();
    for (const auto& r : s.residual_basis) res.push_back(to_json(r));
    return {{"pairs", pairs}, {"residual_basis", res}, {"residual_form", to_json(s.residual_form)}};
}

Json to_json(const FFSweep& s) {
    Json j{{"p", s.p}, {"verdict", verdict_name(s.verdict)}, {"points", s.points}};
    j["witness"] = s.witness ? to_json(*s.witness) : Json(nullptr);
    return j;
}

Json to_json(const AdmissibilityReport& r) {
    Json sweeps = Json::array();
    for (const auto& s : r.perp_system_sweeps) sweeps.push_back(to_json(s));
    return {{"contained_in_q3", r.contained_in_q3},
            {"pair_disc", to_json(r.pair_disc)},
            {"vacuous", r.vacuous},
            {"perp_system_sweeps", sweeps},
            {"skipped_primes", r.skipped_primes},
            {"verdict", r.verdict == Verdict::admissible ? "admissible" : "not_admissible"},
            {"reason", r.reason}};
}

Json to_json(const CountRecord& r) { return {{"p", r.p}, {"t", r.t}, {"count", r.count}}; }

Json to_json(const DescentBudgets& b) {
    return {{"generator_tries", b.generator_tries},
            {"c_candidates", b.c_candidates},
            {"split_height", b.split_height},
            {"plane_tries", b.plane_tries},
            {"extend_tries", b.extend_tries},
            {"sweep_points", b.sweep_points},
            {"approx_height_digits", b.approx_height_digits},
            {"padic_extra", b.padic_extra},
            {"final_height", b.final_height},
            {"final_points", b.final_points},
            {"smooth_point_budget", b.smooth_point_budget}};
}

Json to_json(const DescentInput& in) {
    Json targets = Json::array();
    for (const auto& t : in.targets) targets.push_back(to_json(t));
    return {{"system", to_json(in.system)}, {"targets", targets},          {"epsilon", to_json(in.epsilon)},
            {"seed", in.seed},              {"budgets", to_json(in.budgets)}, {"ff_primes", in.ff_primes},
            {"forced_t", in.forced_t}};
}

Json to_json(const LocalWitness& w) {
    Json j{{"place", to_json(w.place)}};
    if (w.place.real) {
        j["coords"] = to_json(w.coords);
        j["point"] = to_json(w.point);
        j["radius"] = to_json(w.radius);
    } else {
        j["padic_coords"] = to_json(w.padic_coords);
        j["padic_point"] = to_json(w.padic_point);
    }
    return j;
}

Json to_json(const TRecord& r) {
    return {{"p", r.p}, {"forced", r.forced}, {"extension", to_json(r.extension)}, {"witness", to_json(r.witness)}};
}

Json to_json(const DescentCertificate& c) {
    Json chain = Json::array(), reports = Json::array(), wit = Json::array(), trec = Json::array();
    for (const auto& l : c.chain) chain.push_back(to_json(l));
    for (const auto& r : c.reports) reports.push_back(to_json(r));
    for (const auto& w : c.local_witnesses) wit.push_back(to_json(w));
    for (const auto& r : c.t_record) trec.push_back(to_json(r));
    Json j{{"n", c.n},
           {"n_at_least_19", c.n_at_least_19},
           {"s_covers_small_primes", c.s_covers_small_primes},
           {"seed", c.seed},
           {"generators", to_json(c.generators)},
           {"c", to_json(c.c)},
           {"c_signature", to_json(c.c_signature)},
           {"adjusted", to_json(c.adjusted)},
           {"split", to_json(c.split)},
           {"chain", chain},
           {"reports", reports},
           {"local_witnesses", wit},
           {"disc_primes", c.disc_primes},
           {"disc_cofactor", to_json(c.disc_cofactor)},
           {"t_record", trec},
           {"final_height_bound", c.final_height_bound},
           {"plane_attempts", c.plane_attempts}};
    j["final_point"] = c.final_point ? to_json(*c.final_point) : Json(nullptr);
    return j;
}

template <>
Rat from_json<Rat>(const Json& j) {
    return guarded("rational", [&] { return rat_of(j); });
}

template <>
Int from_json<Int>(const Json& j) {
    return guarded("integer", [&] { return int_of(j); });
}

template <>
Vec from_json<Vec>(const Json& j) {
    return guarded("vector", [&] { return vec_of(j); });
}

template <>
IntVec from_json<IntVec>(const Json& j) {
    return guarded("integer vector", [&] { return intvec_of(j); });
}

template <>
QuadForm from_json<QuadForm>(const Json& j) {
    return guarded("quadratic form", [&] {
        const std::size_t n = size_of(j, "n");
        Mat g = mat_of(field(j, "gram"), n);
        if (g.rows() != n) throw Malformed("gram matrix must be n x n");
        return QuadForm(g);
    });
}

template <>
QuadSystem from_json<QuadSystem>(const Json& j) {
    return guarded("quadric system", [&] {
        const Json& f = field(j, "forms");
        if (!f.is_array() || f.size() != 3) throw Malformed("a system has exactly three forms");
        QuadSystem s(from_json<QuadForm>(f[0]), from_json<QuadForm>(f[1]), from_json<QuadForm>(f[2]));
        if (s[1].n() != s.n() || s[2].n() != s.n()) throw Malformed("forms differ in dimension");
        if (j.contains("n") && size_of(j, "n") != s.n()) throw Malformed("n does not match the forms");
        return s;
    });
}

template <>
LinearSpace from_json<LinearSpace>(const Json& j) {
    return guarded("linear space", [&] {
        const std::size_t n = size_of(j, "n");
        LinearSpace l(mat_of(field(j, "basis"), n));
        if (j.contains("t") && size_of(j, "t") != l.t()) throw Malformed("t does not match the basis");
        return l;
    });
}

template <>
FFPoint from_json<FFPoint>(const Json& j) {
    return guarded("finite-field point", [&] {
        FFPoint p;
        p.p = u64_of(field(j, "p"));
        p.coords = u64s_of(field(j, "coords"));
        return p;
    });
}

template <>
PadicApprox from_json<PadicApprox>(const Json& j) {
    return guarded("p-adic point", [&] {
        u64 p = u64_of(field(j, "p"));
        if (!is_prime(p)) throw Malformed("p must be prime");
        auto prec = static_cast<unsigned>(u64_of(field(j, "precision")));
        if (prec == 0) throw Malformed("precision must be positive");
        IntVec c = intvec_of(field(j, "coords"));
        PadicApprox a{p, prec, {}};
        for (const auto& x : c) {
            if (x < 0 || x >= a.modulus()) throw Malformed("p-adic coordinates must be residues in [0, p^precision)");
            a.coords.push_back(x);
        }
        return a;
    });
}

template <>
Place from_json<Place>(const Json& j) {
    return guarded("place", [&] {
        if (j.is_string()) {
            if (j.get<std::string>() == "real") return Place::infinite();
            return Place::prime(std::stoull(j.get<std::string>()));
        }
        return Place::prime(u64_of(j));
    });
}

template <>
LocalTarget from_json<LocalTarget>(const Json& j) {
    return guarded("local target", [&] {
        Place pl = from_json<Place>(field(j, "place"));
        if (pl.real) return LocalTarget::real_target(vec_of(field(j, "point")), rat_of(field(j, "eps")));
        PadicApprox a = from_json<PadicApprox>(field(j, "padic"));
        if (a.p != pl.p) throw Malformed("place and p-adic prime differ");
        return LocalTarget::finite_target(a, static_cast<unsigned>(u64_of(field(j, "k"))));
    });
}

template <>
Signature from_json<Signature>(const Json& j) {
    return guarded("signature", [&] {
        return Signature{size_of(j, "n_plus"), size_of(j, "n_minus"), size_of(j, "n_zero")};
    });
}

template <>
GeneratorTriple from_json<GeneratorTriple>(const Json& j) {
    return guarded("generator triple", [&] {
        GeneratorTriple g;
        g.m1 = vec_of(field(j, "m1"));
        g.m2 = vec_of(field(j, "m2"));
        g.m3 = vec_of(field(j, "m3"));
        g.d1_m3 = rat_of(field(j, "d1_m3"));
        g.d2_m1m2 = rat_of(field(j, "d2_m1m2"));
        g.d2_m1m3 = rat_of(field(j, "d2_m1m3"));
        g.det_m = rat_of(field(j, "det_m"));
        g.tries = size_of(j, "tries");
        return g;
    });
}

template <>
HyperbolicSplit from_json<HyperbolicSplit>(const Json& j) {
    return guarded("hyperbolic split", [&] {
        HyperbolicSplit s;
        for (const auto& pr : field(j, "pairs")) s.pairs.emplace_back(vec_of(field(pr, "v")), vec_of(field(pr, "w")));
        for (const auto& r : field(j, "residual_basis")) s.residual_basis.push_back(vec_of(r));
        s.residual_form = from_json<QuadForm>(field(j, "residual_form"));
        return s;
    });
}

template <>
FFSweep from_json<FFSweep>(const Json& j) {
    return guarded("sweep", [&] {
        FFSweep s;
        s.p = u64_of(field(j, "p"));
        s.verdict = verdict_of(field(j, "verdict").get<std::string>());
        s.points = u64_of(field(j, "points"));
        const Json& w = field(j, "witness");
        if (!w.is_null()) s.witness = from_json<FFPoint>(w);
        return s;
    });
}

template <>
AdmissibilityReport from_json<AdmissibilityReport>(const Json& j) {
    return guarded("admissibility report", [&] {
        AdmissibilityReport r;
        r.contained_in_q3 = field(j, "contained_in_q3").get<bool>();
        r.pair_disc = rat_of(field(j, "pair_disc"));
        r.vacuous = field(j, "vacuous").get<bool>();
        for (const auto& s : field(j, "perp_system_sweeps")) r.perp_system_sweeps.push_back(from_json<FFSweep>(s));
        r.skipped_primes = u64s_of(field(j, "skipped_primes"));
        std::string v = field(j, "verdict").get<std::string>();
        if (v != "admissible" && v != "not_admissible") throw Malformed("unknown admissibility verdict");
        r.verdict = v == "admissible" ? Verdict::admissible : Verdict::not_admissible;
        r.reason = field(j, "reason").get<std::string>();
        return r;
    });
}

template <>
CountRecord from_json<CountRecord>(const Json& j) {
    return guarded("count record", [&] {
        return CountRecord{u64_of(field(j, "p")), field(j, "t").get<long>(), u64_of(field(j, "count"))};
    });
}

template <>
DescentBudgets from_json<DescentBudgets>(const Json& j) {
    return guarded("budgets", [&] {
        DescentBudgets b;
        if (!j.is_object()) throw Malformed("budgets must be an object");
        auto get = [&](const char* key, auto& slot) {
            if (!j.contains(key)) return;
            auto v = u64_of(j.at(key));
            if (v == 0 && std::string(key) != "final_height") throw Malformed(std::string("budget '") + key + "' must be positive");
            slot = static_cast<std::remove_reference_t<decltype(slot)>>(v);
        };
        get("generator_tries", b.generator_tries);
        get("c_candidates", b.c_candidates);
        get("split_height", b.split_height);
        get("plane_tries", b.plane_tries);
        get("extend_tries", b.extend_tries);
        get("sweep_points", b.sweep_points);
        get("approx_height_digits", b.approx_height_digits);
        get("padic_extra", b.padic_extra);
        get("final_height", b.final_height);
        get("final_points", b.final_points);
        get("smooth_point_budget", b.smooth_point_budget);
        return b;
    });
}

template <>
DescentInput from_json<DescentInput>(const Json& j) {
    return guarded("descent input", [&] {
        DescentInput in;
        in.system = from_json<QuadSystem>(field(j, "system"));
        for (const auto& t : field(j, "targets")) in.targets.push_back(from_json<LocalTarget>(t));
        if (j.contains("epsilon")) in.epsilon = rat_of(j.at("epsilon"));
        if (j.contains("seed")) in.seed = u64_of(j.at("seed"));
        if (j.contains("budgets")) in.budgets = from_json<DescentBudgets>(j.at("budgets"));
        if (j.contains("ff_primes")) in.ff_primes = u64s_of(j.at("ff_primes"));
        if (j.contains("forced_t")) in.forced_t = u64s_of(j.at("forced_t"));
        return in;
    });
}

template <>
LocalWitness from_json<LocalWitness>(const Json& j) {
    return guarded("local witness", [&] {
        LocalWitness w;
        w.place = from_json<Place>(field(j, "place"));
        if (w.place.real) {
            w.coords = vec_of(field(j, "coords"));
            w.point = vec_of(field(j, "point"));
            w.radius = rat_of(field(j, "radius"));
        } else {
            w.padic_coords = from_json<PadicApprox>(field(j, "padic_coords"));
            w.padic_point = from_json<PadicApprox>(field(j, "padic_point"));
        }
        return w;
    });
}

template <>
TRecord from_json<TRecord>(const Json& j) {
    return guarded("T record", [&] {
        TRecord r;
        r.p = u64_of(field(j, "p"));
        r.forced = field(j, "forced").get<bool>();
        r.extension = intvec_of(field(j, "extension"));
        r.witness = from_json<LocalWitness>(field(j, "witness"));
        return r;
    });
}

template <>
DescentCertificate from_json<DescentCertificate>(const Json& j) {
    return guarded("certificate", [&] {
        DescentCertificate c;
        c.n = size_of(j, "n");
        c.n_at_least_19 = field(j, "n_at_least_19").get<bool>();
        c.s_covers_small_primes = field(j, "s_covers_small_primes").get<bool>();
        c.seed = u64_of(field(j, "seed"));
        c.generators = from_json<GeneratorTriple>(field(j, "generators"));
        c.c = rat_of(field(j, "c"));
        c.c_signature = from_json<Signature>(field(j, "c_signature"));
        c.adjusted = from_json<QuadSystem>(field(j, "adjusted"));
        c.split = from_json<HyperbolicSplit>(field(j, "split"));
        for (const auto& l : field(j, "chain")) c.chain.push_back(from_json<LinearSpace>(l));
        for (const auto& r : field(j, "reports")) c.reports.push_back(from_json<AdmissibilityReport>(r));
        for (const auto& w : field(j, "local_witnesses")) c.local_witnesses.push_back(from_json<LocalWitness>(w));
        c.disc_primes = u64s_of(field(j, "disc_primes"));
        c.disc_cofactor = int_of(field(j, "disc_cofactor"));
        for (const auto& r : field(j, "t_record")) c.t_record.push_back(from_json<TRecord>(r));
        c.final_height_bound = field(j, "final_height_bound").get<long>();
        const Json& fp = field(j, "final_point");
        if (!fp.is_null()) c.final_point = intvec_of(fp);
        c.plane_attempts = size_of(j, "plane_attempts");
        return c;
    });
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Malformed(std::string("invalid JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Malformed("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_json(ss.str());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tq
