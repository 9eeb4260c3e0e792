#pragma once

// Command dispatch for the tq binary. Exit codes: 0 success or positive
// verdict, 1 negative verdict or not found, 2 input/schema error, 3 budget
// exhausted.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tq {

enum class Command {
    check_system,
    fano_dim,
    count_fano,
    split,
    local_solve,
    lift,
    weak_approx,
    find_plane,
    chain,
    descend,
    verify
};

std::optional<Command> parse_command(const std::string& name);
const std::vector<std::string>& command_names();

struct RunConfig {
    Command command = Command::check_system;
    std::vector<std::string> args;  // positional arguments
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::optional<std::uint64_t> budget;
    unsigned workers = 1;
    std::string output;  // empty: stdout

    std::string place;     // local-solve
    unsigned prec = 0;     // lift
    long dim = 3;          // find-plane
    long height = 6;       // split, find-plane, chain, weak-approx search height
    bool rerun_sweeps = false;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int input = 2;
inline constexpr int budget = 3;
}  // namespace exit_code

/// Runs one command; results go to `out` (or the output file), diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace tq
