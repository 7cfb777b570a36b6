// lwrnet: run the merge-junction traffic simulations from the command line.
//
//   lwrnet run --config scenario.json [--out DIR]
//   lwrnet preset exp1|exp2|exp3 [--solver S] [--cells M] [--cfl C] [--lambda L] [--out DIR] [--dump-config]
//   lwrnet compare (--config FILE | --preset NAME) [--out DIR]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical or I/O failure.

#include "lwrnet/config.hpp"
#include "lwrnet/output.hpp"
#include "lwrnet/simulation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

lwrnet::Scenario preset_scenario(const std::string& name) {
    static const std::map<std::string, lwrnet::Experiment> presets{
        {"exp1", lwrnet::Experiment::free_flow},
        {"exp2", lwrnet::Experiment::congestion},
        {"exp3", lwrnet::Experiment::double_congestion},
    };
    const auto it = presets.find(name);
    if (it == presets.end()) {
        throw lwrnet::ConfigError("unknown preset \"" + name + "\" (expected exp1, exp2 or exp3)");
    }
    return lwrnet::preset(it->second, lwrnet::SolverChoice::relaxation);
}

void print_comparison(const lwrnet::ComparisonReport& report) {
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& d = report.roads[k];
        std::printf("road %zu: relative L1 %.3e  relative Linf %.3e  max junction flux diff %.3e\n", k + 1,
                    d.l1_rel, d.linf_rel, d.max_junction_flux);
    }
}

void print_run(const lwrnet::SimulationResult& r, const std::string& dir) {
    std::printf("%s: %zu steps, mass defect %.3e, fallbacks %zu, max Kirchhoff residual %.3e -> %s\n",
                std::string(lwrnet::to_string(r.solver)).c_str(), r.steps, r.mass.defect,
                r.diagnostics.fallback_count, r.diagnostics.max_kirchhoff_residual, dir.c_str());
}

void execute(const lwrnet::RunConfig& cfg) {
    const auto& s = cfg.scenario;
    if (s.solver == lwrnet::SolverChoice::both) {
        const auto report = lwrnet::compare(s);
        lwrnet::write_comparison(report, cfg.output_dir);
        print_run(report.relaxation, cfg.output_dir + "/relaxation");
        print_run(report.classical, cfg.output_dir + "/classical");
        print_comparison(report);
        return;
    }
    const auto result = lwrnet::run(s);
    lwrnet::write_outputs(result, cfg.output_dir);
    print_run(result, cfg.output_dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merge-junction LWR traffic simulations"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario from a JSON config");
    run_cmd->add_option("--config", config_path, "Scenario file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    std::string preset_name;
    std::string solver_name = "relaxation";
    std::optional<std::size_t> cells;
    std::optional<double> cfl;
    std::optional<double> lambda;
    bool dump_config = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run one of the built-in experiments");
    preset_cmd->add_option("name", preset_name, "exp1, exp2 or exp3")->required();
    preset_cmd->add_option("--solver", solver_name, "relaxation, classical or both");
    preset_cmd->add_option("--cells", cells, "Cells per road");
    preset_cmd->add_option("--cfl", cfl, "CFL number");
    preset_cmd->add_option("--lambda", lambda, "Relaxation speed");
    preset_cmd->add_option("--out", out_dir, "Output directory");
    preset_cmd->add_flag("--dump-config", dump_config, "Print the preset as a JSON config and exit");

    std::string compare_config;
    std::string compare_preset;
    auto* compare_cmd = app.add_subcommand("compare", "Run both junction solvers and report differences");
    auto* cfg_opt = compare_cmd->add_option("--config", compare_config, "Scenario file");
    auto* preset_opt = compare_cmd->add_option("--preset", compare_preset, "exp1, exp2 or exp3");
    cfg_opt->excludes(preset_opt);
    compare_cmd->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        lwrnet::RunConfig cfg;
        if (run_cmd->parsed()) {
            cfg = lwrnet::load_config(config_path);
        } else if (preset_cmd->parsed()) {
            cfg.scenario = preset_scenario(preset_name);
            cfg.scenario.solver = lwrnet::parse_solver(solver_name);
            if (cells) cfg.scenario.cells = *cells;
            if (cfl) cfg.scenario.cfl = *cfl;
            if (lambda) cfg.scenario.lambda = *lambda;
            cfg.output_dir = "out";
            if (out_dir) cfg.output_dir = *out_dir;
            cfg.scenario.validate();
            if (dump_config) {
                std::cout << lwrnet::to_json(cfg).dump(2) << '\n';
                return 0;
            }
        } else {
            if (!compare_config.empty()) {
                cfg = lwrnet::load_config(compare_config);
            } else if (!compare_preset.empty()) {
                cfg.scenario = preset_scenario(compare_preset);
            } else {
                throw lwrnet::ConfigError("compare needs --config or --preset");
            }
            cfg.scenario.solver = lwrnet::SolverChoice::both;
        }
        if (out_dir) cfg.output_dir = *out_dir;
        execute(cfg);
    } catch (const lwrnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
