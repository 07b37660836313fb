// fedgl: generate synthetic silos, run PPGL or a baseline, grid-search, report.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedgl/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "key = value config file");
    cmd->add_option("--seed", args.seed, "overrides the config seed");
    cmd->add_option("--set", args.overrides, "extra key=value override, repeatable");
}

fedgl::ExperimentConfig resolve(const CommonArgs& args) {
    fedgl::ExperimentConfig config;
    if (!args.config.empty()) config = fedgl::load_config(args.config);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw fedgl::ConfigError("--set expects key=value, got '" + kv + "'");
        fedgl::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed) config.seed = *args.seed;
    config.validate();
    return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated graph learning from smooth signals in isolated clients"};
    app.require_subcommand(1);

    CommonArgs gen_args;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset directory");
    add_common(gen, gen_args);
    gen->add_option("--out", gen_out, "dataset directory")->required();

    CommonArgs run_args;
    std::string run_method = "ppgl";
    std::string run_data;
    std::string run_out;
    auto* run = app.add_subcommand("run", "run one method on a dataset directory");
    add_common(run, run_args);
    run->add_option("--method", run_method, "ppgl, igl or global")->capture_default_str();
    run->add_option("--data", run_data, "dataset directory from 'generate'")->required();
    run->add_option("--out", run_out, "results directory")->required();

    CommonArgs grid_args;
    std::string grid_data;
    std::string grid_out;
    auto* grid = app.add_subcommand("grid", "PPGL over the beta x nu x lambda grid");
    add_common(grid, grid_args);
    grid->add_option("--data", grid_data, "dataset directory from 'generate'")->required();
    grid->add_option("--out", grid_out, "results directory")->required();

    std::vector<std::string> report_dirs;
    std::string report_out;
    auto* report = app.add_subcommand("report", "average metrics.csv files by method");
    report->add_option("results", report_dirs, "results directories")->required();
    report->add_option("--out", report_out, "write the summary here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gen) {
            fedgl::cmd_generate(resolve(gen_args), gen_out);
            return kExitOk;
        }
        if (*run) {
            const auto config = resolve(run_args);
            const auto summary =
                fedgl::cmd_run(config, run_data, fedgl::parse_method(run_method), run_out);
            print_warnings(summary.warnings);
            std::cout << fedgl::metrics_csv(summary.rows);
            return summary.converged ? kExitOk : kExitNonConvergence;
        }
        if (*grid) {
            const auto config = resolve(grid_args);
            const auto result = fedgl::cmd_grid(config, grid_data, grid_out);
            const auto& bl = result.points[result.best_local];
            const auto& bc = result.points[result.best_consensus];
            std::cout << "best local FS " << bl.local.fs << " at beta=" << bl.beta
                      << " nu=" << bl.nu << " lambda=" << bl.lambda << '\n'
                      << "best consensus FS " << bc.consensus.fs << " at beta=" << bc.beta
                      << " nu=" << bc.nu << " lambda=" << bc.lambda << '\n';
            return result.converged ? kExitOk : kExitNonConvergence;
        }
        if (*report) {
            std::vector<std::filesystem::path> dirs(report_dirs.begin(), report_dirs.end());
            if (report_out.empty()) {
                fedgl::cmd_report(dirs, std::cout);
            } else {
                std::ofstream out(report_out);
                if (!out) throw fedgl::IoError("cannot write '" + report_out + "'");
                fedgl::cmd_report(dirs, out);
            }
            return kExitOk;
        }
    } catch (const fedgl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fedgl::StepsizeError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitOther;
}
