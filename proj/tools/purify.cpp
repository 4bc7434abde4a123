// purify: command-line front end for the purification library.
//
//   purify <analytic|sdp|certify|circuit|sample-complexity|recurse> [mode] [flags]
//
// Exit codes: 0 success, 1 library error, 2 usage error, 3 some rows failed.

#include "commands.hpp"
#include "purify/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

void print_error(const std::string& type, const std::string& message, const double* best_residual = nullptr) {
    nlohmann::ordered_json e = {{"type", type}, {"message", message}};
    if (best_residual) e["best_residual"] = *best_residual;
    std::cout << nlohmann::ordered_json{{"error", e}}.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    using purify::cli::RunConfig;
    RunConfig cfg;
    std::string format = "json";
    std::string out_path;

    CLI::App app{"Probabilistic state purification: analytic values, SDP optima, certificates and circuits"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file; flags given on the command line win");

    app.add_option("--noise", cfg.noise, "depolarizing | pauli | ad")
        ->check(CLI::IsMember({"depolarizing", "pauli", "ad"}));
    app.add_option("--d", cfg.d, "local dimension");
    app.add_option("--delta", cfg.delta, "noise strength");
    app.add_option("--delta-grid", cfg.delta_grid, "lo:hi:count");
    app.add_option("--n", cfg.n, "copies (comma list for recurse)")->delimiter(',');
    app.add_option("--p", cfg.p, "success probability or 'golden'");
    app.add_option("--f", cfg.f, "fidelity or 'golden'");
    app.add_option("--f-goal", cfg.f_goal, "target fidelity");
    app.add_option("--p-grid", cfg.p_grid, "lo:hi:count");
    app.add_option("--n-max", cfg.n_max, "largest n");
    app.add_option("--depth", cfg.depth, "recursion depth");
    app.add_option("--seed", cfg.seed, "training seed");
    app.add_option("--restarts", cfg.restarts, "training restarts");
    app.add_flag("--train", cfg.train, "train the four-copy circuit");
    app.add_flag("--extended", cfg.extended, "use the seven-slot four-copy sequence");
    app.add_flag("--reference-angles", cfg.reference_angles, "evaluate the reference four-copy angles");
    app.add_flag("--reference-table", cfg.reference_table, "sample complexity against the reference table");
    app.add_option("--angles", cfg.angles, "comma-separated angles")->delimiter(',');
    app.add_option("--netlist", cfg.netlist, "write the circuit netlist here");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "output file (default stdout)");

    struct Sub {
        const char* name;
        const char* help;
        std::vector<std::string> modes;
    };
    const std::vector<Sub> subs = {
        {"analytic", "closed-form p_n, f_n", {}},
        {"sdp", "fidelity / probability SDPs and sweeps", {"fidelity", "probability", "sweep"}},
        {"certify", "two-copy optimality certificate", {"golden"}},
        {"circuit", "circuit block encodings", {"three", "lcu", "four"}},
        {"sample-complexity", "copies needed for a target fidelity", {}},
        {"recurse", "recursive purification", {}},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        if (!s.modes.empty()) sub->add_option("mode", cfg.mode, "mode")->required()->check(CLI::IsMember(s.modes));
        sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return 2;
    }

    try {
        const auto result = purify::cli::run(cfg);
        const std::string text =
            format == "csv" ? purify::to_csv(result.record) : purify::to_json(result.record) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) throw purify::InvalidArgument("cannot open output file " + out_path);
            out << text;
        }
        return result.ok ? 0 : 3;
    } catch (const purify::TrainingFailed& e) {
        const double best = e.best_residual();
        print_error("TrainingFailed", e.what(), &best);
    } catch (const purify::InvalidArgument& e) {
        print_error("InvalidArgument", e.what());
    } catch (const purify::BudgetExceeded& e) {
        print_error("BudgetExceeded", e.what());
    } catch (const purify::UnreachableGoal& e) {
        print_error("UnreachableGoal", e.what());
    } catch (const purify::Error& e) {
        print_error("Error", e.what());
    }
    return 1;
}
