#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "tq/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tq: exact tools for systems of three quadratic forms"};
    app.require_subcommand(1);

    tq::RunConfig cfg;
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t budget = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--budget", budget, "point or cell budget")->check(CLI::PositiveNumber);
        sub->add_option("--output,-o", cfg.output, "write results here instead of stdout");
        sub->add_option("args", cfg.args, "positional arguments");
    };

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"check-system", "certify pair and triple nonsingularity of a system"},
        {"fano-dim", "dimension of the Fano variety: n t r"},
        {"count-fano", "count t-planes on a form over F_p"},
        {"split", "hyperbolic splitting of a form"},
        {"local-solve", "local solvability of a form at a place"},
        {"lift", "Hensel lift a point mod p to precision k"},
        {"weak-approx", "rational point close to local targets"},
        {"find-plane", "admissible t-plane inside the third quadric"},
        {"chain", "extend a plane through admissible planes to dimension 7"},
        {"descend", "run the full descent and write a certificate"},
        {"verify", "recheck a certificate against its input"},
    };
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        const std::string name = s.name;
        if (name == "local-solve") sub->add_option("--place", cfg.place, "real or a prime")->required();
        if (name == "lift") sub->add_option("--prec", cfg.prec, "target precision")->required()->check(CLI::PositiveNumber);
        if (name == "find-plane") sub->add_option("--dim", cfg.dim, "plane dimension t");
        if (name == "split" || name == "find-plane" || name == "chain" || name == "weak-approx")
            sub->add_option("--height", cfg.height, "search height for isotropic vectors");
        if (name == "verify") sub->add_flag("--rerun-sweeps", cfg.rerun_sweeps, "repeat the finite-field sweeps");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : tq::exit_code::input;
    }

    auto* sub = app.get_subcommands().front();
    cfg.command = *tq::parse_command(sub->get_name());
    cfg.seed_set = sub->count("--seed") > 0;
    if (sub->count("--budget") > 0) cfg.budget = budget;
    return tq::run(cfg, std::cout, std::cerr);
}
