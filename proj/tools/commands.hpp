#pragma once

#include "purify/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace purify::cli {

struct RunConfig {
    std::string command;  // analytic | sdp | certify | circuit | sample-complexity | recurse
    std::string mode;     // sdp: fidelity | probability | sweep; circuit: three | lcu | four; certify: golden
    std::string noise = "depolarizing";
    int d = 2;
    double delta = 0.3;
    std::optional<std::string> delta_grid;  // lo:hi:count
    std::vector<int> n{2};
    std::optional<std::string> p;  // number or "golden"
    std::optional<std::string> f;  // number or "golden"
    std::optional<double> f_goal;
    std::optional<std::string> p_grid;  // lo:hi:count
    int n_max = 5;
    int depth = 3;
    std::uint64_t seed = 7;
    int restarts = 16;
    bool train = false;
    bool extended = false;
    bool reference_angles = false;
    bool reference_table = false;
    std::vector<double> angles;
    std::optional<std::string> netlist;
};

struct CommandOutput {
    ResultRecord record;
    bool ok = true;  // false when a requested row failed
};

// lo:hi:count, evenly spaced and inclusive.
std::vector<double> parse_grid(const std::string& spec);

CommandOutput run(const RunConfig& cfg);

CommandOutput cmd_analytic(const RunConfig& cfg);
CommandOutput cmd_sdp(const RunConfig& cfg);
CommandOutput cmd_certify(const RunConfig& cfg);
CommandOutput cmd_circuit(const RunConfig& cfg);
CommandOutput cmd_sample_complexity(const RunConfig& cfg);
CommandOutput cmd_recurse(const RunConfig& cfg);

}  // namespace purify::cli
