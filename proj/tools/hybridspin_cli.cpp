#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridspin/run.hpp"

using namespace hybridspin;

namespace {

int snapshot_override_from_flag(const std::string& flag) {
    if (flag.empty() || flag == "none") return -1;
    if (flag.rfind("stride=", 0) == 0) {
        const int s = std::stoi(flag.substr(7));
        if (s <= 0) throw ConfigError("snapshot stride must be positive");
        return s;
    }
    throw ConfigError("--snapshots expects 'none' or 'stride=N', got '" + flag + "'");
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return static_cast<int>(ExitCode::ok);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::config_error);
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return static_cast<int>(ExitCode::contract_violation);
    } catch (const PositivityViolation& e) {
        std::cerr << "positivity violation: " << e.what() << "\n";
        return static_cast<int>(ExitCode::positivity_violation);
    } catch (const DegenerateDensity& e) {
        std::cerr << "degenerate density: " << e.what() << "\n";
        return static_cast<int>(ExitCode::degenerate_density);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return static_cast<int>(ExitCode::numerical_failure);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridspin: mixed quantum-classical spin dynamics on the Bloch sphere"};
    app.require_subcommand(1);

    std::string config_path, config_b_path, output_dir, snapshots;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* cmd_run = app.add_subcommand("run", "integrate one configuration");
    cmd_run->add_option("--config", config_path, "run configuration (JSON)")->required();
    cmd_run->add_option("--output", output_dir, "output directory (overrides config)");
    cmd_run->add_option("--snapshots", snapshots, "none or stride=N");

    auto* cmd_cmp = app.add_subcommand("compare", "run two models on the same setup");
    cmd_cmp->add_option("--config", config_path, "first configuration")->required();
    cmd_cmp->add_option("--config-b", config_b_path, "second configuration")->required();
    cmd_cmp->add_option("--output", output_dir, "output directory");

    auto* cmd_sweep = app.add_subcommand("sweep", "convergence sweep along dt or grid");
    std::string axis = "dt";
    std::vector<double> factors{1.0, 2.0};
    cmd_sweep->add_option("--config", config_path, "base configuration")->required();
    cmd_sweep->add_option("--axis", axis, "dt or grid")->check(CLI::IsMember({"dt", "grid"}));
    cmd_sweep->add_option("--factors", factors, "refinement factors, e.g. 1 2 4");
    cmd_sweep->add_option("--output", output_dir, "output directory");

    auto* cmd_val = app.add_subcommand("validate-config", "parse and echo a configuration");
    cmd_val->add_option("--config", config_path, "configuration to validate")->required();

    CLI11_PARSE(app, argc, argv);

    return guarded([&] {
        if (cmd_run->parsed()) {
            RunConfig cfg = load_config(config_path);
            execute_run(cfg, output_dir, quiet, snapshot_override_from_flag(snapshots));
        } else if (cmd_cmp->parsed()) {
            RunConfig a = load_config(config_path);
            RunConfig b = load_config(config_b_path);
            execute_compare(a, b, output_dir, quiet);
        } else if (cmd_sweep->parsed()) {
            RunConfig cfg = load_config(config_path);
            execute_sweep(cfg, axis == "dt" ? SweepAxis::dt : SweepAxis::grid, factors, output_dir,
                          quiet);
        } else if (cmd_val->parsed()) {
            RunConfig cfg = load_config(config_path);
            std::cout << serialize_config(cfg) << "\n";
        }
    });
}
