#include "tq/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "tq/descent.hpp"
#include "tq/fano.hpp"
#include "tq/json_io.hpp"
#include "tq/local.hpp"
#include "tq/planes.hpp"
#include "tq/random.hpp"

namespace tq {

namespace {

struct Outcome {
    int code = exit_code::ok;
    std::string text;
};

void need_args(const RunConfig& cfg, std::size_t k, const char* usage) {
    if (cfg.args.size() != k) throw Malformed(std::string("usage: tq ") + usage);
}

long parse_long(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw Malformed("");
        return v;
    } catch (const std::exception&) {
        throw Malformed(std::string("expected an integer for ") + what + ", got '" + s + "'");
    }
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

QuadSystem read_system(const std::string& path) { return from_json<QuadSystem>(read_json_file(path)); }
QuadForm read_form(const std::string& path) { return from_json<QuadForm>(read_json_file(path)); }

PlaneOptions plane_opts(const RunConfig& cfg) {
    PlaneOptions o;
    o.workers = cfg.workers;
    if (cfg.budget) o.budget = *cfg.budget;
    return o;
}

Json pair_json(const char* name, const PairVerdict& v) {
    return {{"pair", name}, {"nonsingular", v.nonsingular}, {"witness", to_json(v.witness)}};
}

Outcome check_system(const RunConfig& cfg) {
    need_args(cfg, 1, "check-system <system.json>");
    QuadSystem s = read_system(cfg.args[0]);
    Json pairs = Json::array();
    bool ok = true;
    const std::pair<const char*, std::pair<int, int>> names[] = {{"12", {0, 1}}, {"13", {0, 2}}, {"23", {1, 2}}};
    for (const auto& [name, ij] : names) {
        auto v = pair_nonsingular(s[ij.first], s[ij.second]);
        ok = ok && v.nonsingular;
        pairs.push_back(pair_json(name, v));
    }
    Vec e3{0, 0, 1};
    bool d1 = d1_value(s, e3) != 0;
    ok = ok && d1;
    Json gen = nullptr;
    try {
        gen = to_json(select_generators(s, cfg.seed, 200));
    } catch (const BudgetExceeded&) {
        ok = false;
    }
    Json sweeps = Json::array();
    SweepOptions so;
    so.workers = cfg.workers;
    for (u64 p : {3, 5}) {
        auto sw = triple_nonsingular_ff(s, p, cfg.budget.value_or(100000000), so);
        ok = ok && sw.verdict != SweepVerdict::singular_witness;
        sweeps.push_back(to_json(sw));
    }
    Json j{{"pair_verdicts", pairs}, {"d1_nonzero", d1}, {"generator_triple", gen}, {"ff_sweeps", sweeps}};
    return {ok ? exit_code::ok : exit_code::negative, dump(j)};
}

Outcome fano_dim_cmd(const RunConfig& cfg) {
    need_args(cfg, 3, "fano-dim <n> <t> <r>");
    FanoQuery q{parse_long(cfg.args[0], "n"), parse_long(cfg.args[1], "t"), parse_long(cfg.args[2], "r")};
    auto d = fano_dim(q);
    if (!d) return {exit_code::negative, "empty\n"};
    return {exit_code::ok, std::to_string(*d) + "\n"};
}

Outcome count_fano(const RunConfig& cfg) {
    need_args(cfg, 3, "count-fano <form.json> <p[,p...]> <t>");
    QuadForm q = read_form(cfg.args[0]);
    long t = parse_long(cfg.args[2], "t");
    CountOptions o;
    o.workers = cfg.workers;
    if (cfg.budget) o.max_cells = *cfg.budget;
    auto primes = split_list(cfg.args[1], ',');
    if (primes.size() == 1) {
        auto r = count_planes_ff(q, static_cast<u64>(parse_long(primes[0], "p")), t, o);
        return {exit_code::ok, std::to_string(r.count) + "\n"};
    }
    std::string csv = "p,t,count\n";
    for (const auto& ps : primes) {
        auto r = count_planes_ff(q, static_cast<u64>(parse_long(ps, "p")), t, o);
        csv += std::to_string(r.p) + "," + std::to_string(r.t) + "," + std::to_string(r.count) + "\n";
    }
    return {exit_code::ok, csv};
}

Outcome split_cmd(const RunConfig& cfg) {
    need_args(cfg, 1, "split <form.json>");
    QuadForm q = read_form(cfg.args[0]);
    HyperbolicSplit s = split_hyperbolic(q, cfg.height);
    Json j = to_json(s);
    j["witt_index"] = s.witt_index();
    j["verified"] = verify_split(q, s);
    return {exit_code::ok, dump(j)};
}

Outcome local_solve(const RunConfig& cfg) {
    need_args(cfg, 1, "local-solve <form.json> --place real|p");
    QuadForm q = read_form(cfg.args[0]);
    if (cfg.place.empty()) throw Malformed("--place is required");
    Place v = cfg.place == "real" ? Place::infinite() : Place::prime(static_cast<u64>(parse_long(cfg.place, "place")));
    bool ok = quadric_locally_solvable(q, v);
    Json j{{"place", to_json(v)}, {"solvable", ok}};
    return {ok ? exit_code::ok : exit_code::negative, dump(j)};
}

PadicApprox parse_point(const std::string& s) {
    if (s.size() > 5 && s.substr(s.size() - 5) == ".json") return from_json<PadicApprox>(read_json_file(s));
    auto colon = s.find(':');
    if (colon == std::string::npos) throw Malformed("point must be p[^e]:x1,...,xn or a JSON file");
    std::string head = s.substr(0, colon);
    unsigned e = 1;
    auto caret = head.find('^');
    if (caret != std::string::npos) {
        e = static_cast<unsigned>(parse_long(head.substr(caret + 1), "precision"));
        head = head.substr(0, caret);
    }
    u64 p = static_cast<u64>(parse_long(head, "p"));
    if (!is_prime(p) || e == 0) throw Malformed("point prefix needs a prime and positive precision");
    Int m = pow_int(Int(static_cast<unsigned long>(p)), e);
    IntVec c;
    for (const auto& x : split_list(s.substr(colon + 1), ',')) c.push_back(mod_positive(Int(parse_long(x, "coordinate")), m));
    return make_padic(p, e, c);
}

PolySystem read_poly_system(const std::string& path) {
    Json j = read_json_file(path);
    if (j.is_object() && j.contains("forms")) {
        QuadSystem s = from_json<QuadSystem>(j);
        return PolySystem::from_forms({s[0], s[1], s[2]});
    }
    return PolySystem::from_forms({from_json<QuadForm>(j)});
}

Outcome lift(const RunConfig& cfg) {
    need_args(cfg, 2, "lift <system.json> <point> --prec k");
    if (cfg.prec == 0) throw Malformed("--prec must be positive");
    PolySystem f = read_poly_system(cfg.args[0]);
    PadicApprox p0 = parse_point(cfg.args[1]);
    if (p0.coords.size() != f.nvars) throw Malformed("point has the wrong number of coordinates");
    auto rep = hensel_lift_report(f, p0, cfg.prec);
    Json j{{"point", to_json(rep.point)}, {"minor", rep.minor}, {"v_delta", rep.v_delta}, {"v_residual", rep.v_residual}};
    return {exit_code::ok, dump(j)};
}

Outcome weak_approx(const RunConfig& cfg) {
    need_args(cfg, 2, "weak-approx <form.json> <targets.json>");
    QuadForm q = read_form(cfg.args[0]);
    Json tj = read_json_file(cfg.args[1]);
    std::vector<LocalTarget> targets;
    Vec base;
    Int bound = pow_int(Int(10), 200);
    if (tj.is_array()) {
        for (const auto& t : tj) targets.push_back(from_json<LocalTarget>(t));
    } else {
        if (!tj.is_object() || !tj.contains("targets")) throw Malformed("targets file needs a 'targets' array");
        for (const auto& t : tj.at("targets")) targets.push_back(from_json<LocalTarget>(t));
        if (tj.contains("base")) base = from_json<Vec>(tj.at("base"));
        if (tj.contains("height_bound")) bound = from_json<Int>(tj.at("height_bound"));
    }
    if (base.empty()) {
        auto z = isotropic_vector(q, cfg.height);
        if (!z) throw BudgetExceeded("no rational base point found at height " + std::to_string(cfg.height));
        base = to_vec(*z);
    }
    IntVec x = weak_approx_quadric(q, base, targets, bound, cfg.seed);
    Json j{{"point", to_json(x)}, {"height", to_json(height(x))}, {"base", to_json(base)}};
    return {exit_code::ok, dump(j)};
}

Outcome find_plane(const RunConfig& cfg) {
    need_args(cfg, 1, "find-plane <system.json> --dim t");
    QuadSystem s = read_system(cfg.args[0]);
    if (cfg.dim < 0) throw Malformed("--dim must be non-negative");
    const auto t = static_cast<std::size_t>(cfg.dim);
    HyperbolicSplit sp = split_hyperbolic(s[2], cfg.height);
    if (sp.witt_index() < t + 1)
        throw BudgetExceeded("split isotropic span has dimension " + std::to_string(sp.witt_index()) + " < t+1");
    Rng rng(cfg.seed);
    const std::size_t n = s.n();
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Vec> rows;
        for (std::size_t r = 0; r <= t; ++r) {
            Vec x(n);
            for (std::size_t i = 0; i < sp.witt_index(); ++i) {
                long c = attempt == 0 ? (i == r ? 1 : 0) : rng.uniform(-2, 2);
                if (c != 0) x = add(x, scale(c, sp.pairs[i].first));
            }
            rows.push_back(to_vec(primitive(x)));
        }
        if (rank(Mat::from_rows(rows, n)) != t + 1) continue;
        LinearSpace l = LinearSpace::from_rows(rows, n);
        auto rep = is_admissible(l, s, plane_opts(cfg));
        if (rep.verdict == Verdict::admissible) return {exit_code::ok, dump({{"plane", to_json(l)}, {"report", to_json(rep)}})};
    }
    throw BudgetExceeded("no admissible " + std::to_string(t) + "-plane in 50 attempts");
}

Outcome chain_cmd(const RunConfig& cfg) {
    need_args(cfg, 2, "chain <system.json> <plane.json>");
    QuadSystem s = read_system(cfg.args[0]);
    LinearSpace l = from_json<LinearSpace>(read_json_file(cfg.args[1]));
    if (l.n() != s.n()) throw Malformed("plane and system differ in dimension");
    auto r = chain_admissible_check(l, s, cfg.seed, cfg.height, 30, plane_opts(cfg));
    Json chain = Json::array(), reports = Json::array();
    for (const auto& x : r.chain) chain.push_back(to_json(x));
    for (const auto& x : r.reports) reports.push_back(to_json(x));
    Json j{{"verdict", r.verdict}, {"chain", chain}, {"reports", reports}, {"failure", r.failure}};
    return {r.verdict ? exit_code::ok : exit_code::negative, dump(j)};
}

DescentInput read_input(const RunConfig& cfg, const std::string& path) {
    DescentInput in = from_json<DescentInput>(read_json_file(path));
    if (cfg.seed_set) in.seed = cfg.seed;
    if (cfg.budget) in.budgets.sweep_points = *cfg.budget;
    return in;
}

Outcome descend(const RunConfig& cfg) {
    need_args(cfg, 1, "descend <input.json>");
    DescentInput in = read_input(cfg, cfg.args[0]);
    return {exit_code::ok, dump(to_json(run_descent(in, cfg.workers)))};
}

Outcome verify(const RunConfig& cfg) {
    need_args(cfg, 2, "verify <certificate.json> <input.json>");
    DescentCertificate cert = from_json<DescentCertificate>(read_json_file(cfg.args[0]));
    DescentInput in = read_input(cfg, cfg.args[1]);
    auto rep = verify_certificate(cert, in, cfg.rerun_sweeps, cfg.workers);
    Json j{{"valid", rep.ok}};
    if (!rep.ok) {
        j["failing_claim"] = rep.failing_claim;
        j["detail"] = rep.detail;
    }
    return {rep.ok ? exit_code::ok : exit_code::negative, dump(j)};
}

Outcome dispatch(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::check_system: return check_system(cfg);
        case Command::fano_dim: return fano_dim_cmd(cfg);
        case Command::count_fano: return count_fano(cfg);
        case Command::split: return split_cmd(cfg);
        case Command::local_solve: return local_solve(cfg);
        case Command::lift: return lift(cfg);
        case Command::weak_approx: return weak_approx(cfg);
        case Command::find_plane: return find_plane(cfg);
        case Command::chain: return chain_cmd(cfg);
        case Command::descend: return descend(cfg);
        case Command::verify: return verify(cfg);
    }
    throw Malformed("unknown command");
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"check-system", "fano-dim",    "count-fano", "split",
                                                "local-solve",  "lift",        "weak-approx", "find-plane",
                                                "chain",        "descend",     "verify"};
    return names;
}

std::optional<Command> parse_command(const std::string& name) {
    const auto& names = command_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Command>(i);
    return std::nullopt;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Outcome o;
    try {
        if (cfg.workers == 0) throw Malformed("--workers must be positive");
        if (cfg.budget && *cfg.budget == 0) throw Malformed("--budget must be positive");
        o = dispatch(cfg);
    } catch (const BudgetExceeded& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return exit_code::budget;
    } catch (const Malformed& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input;
    } catch (const DimensionMismatch& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input;
    } catch (const PreconditionViolated& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input;
    } catch (const NotApplicable& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::negative;
    }
    if (cfg.output.empty()) {
        out << o.text;
    } else {
        std::ofstream f(cfg.output);
        if (!f) {
            err << "input error: cannot write " << cfg.output << "\n";
            return exit_code::input;
        }
        f << o.text;
    }
    return o.code;
}

}  // namespace tq
