// Command-line front end: classify hypothesis sets, run the barrier/solve
// pipeline on a config, verify results, and export reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccl/ccl.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_prefix;
    std::string radii_csv;
    std::size_t grid_n = 0;
    double tol = 0.0;
    bool no_plot = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_out) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    auto* out = cmd->add_option("--out", args.out_prefix, "output path prefix");
    if (need_out) out->required();
    cmd->add_option("--radii", args.radii_csv, "override radii list, e.g. 4,8,16");
    cmd->add_option("--grid", args.grid_n, "override cells of the largest ball");
    cmd->add_option("--tol", args.tol, "override solver tolerance");
    cmd->add_flag("--no-plot", args.no_plot, "skip the SVG plot");
}

int fail_config(const std::string& what) {
    nlohmann::json j{{"error", what}, {"exit", ccl::kExitConfig}};
    std::cout << j.dump(2) << std::endl;
    return ccl::kExitConfig;
}

std::optional<ccl::ExperimentConfig> load_and_override(const CommonArgs& args) {
    ccl::ExperimentConfig cfg = ccl::load_config(args.config_path);
    if (!args.radii_csv.empty()) {
        std::vector<double> radii;
        std::string token;
        std::stringstream ss(args.radii_csv);
        while (std::getline(ss, token, ',')) radii.push_back(std::stod(token));
        if (radii.empty()) throw ccl::config_error("--radii", "empty list");
        cfg.radii = radii;
    }
    if (args.grid_n > 0) cfg.grid_n = args.grid_n;
    if (args.tol > 0.0) cfg.tol = args.tol;
    if (args.no_plot) cfg.plot = false;
    if (!args.out_prefix.empty()) cfg.out_prefix = args.out_prefix;
    return cfg;
}

int run_pipeline(const CommonArgs& args, bool with_checks) {
    std::optional<ccl::ExperimentConfig> cfg;
    try {
        cfg = load_and_override(args);
    } catch (const ccl::config_error& e) {
        return fail_config(e.what());
    } catch (const std::exception& e) {
        return fail_config(e.what());
    }
    ccl::ExperimentOutcome outcome = ccl::run_experiment(*cfg, cfg->out_prefix, with_checks);
    if (outcome.exit_code != ccl::kExitOk) {
        std::cout << outcome.report.dump(2) << std::endl;
        std::cerr << "failed: " << outcome.message << std::endl;
    } else {
        nlohmann::json ok{{"status", "ok"},
                          {"csv", outcome.files->csv_path},
                          {"json", outcome.files->json_path}};
        std::cout << ok.dump(2) << std::endl;
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prescribed-curvature laboratory on radial model manifolds"};
    app.require_subcommand(1);

    CommonArgs run_args, classify_args, solve_args, verify_args, compare_args;

    auto* cmd_run = app.add_subcommand("run", "full pipeline with verification checks");
    add_common(cmd_run, run_args, false);

    auto* cmd_classify = app.add_subcommand("classify", "case analysis of the hypotheses");
    add_common(cmd_classify, classify_args, false);

    auto* cmd_solve = app.add_subcommand("solve", "pipeline without the verification gate");
    add_common(cmd_solve, solve_args, false);

    auto* cmd_verify = app.add_subcommand("verify", "alias of run: solve and verify");
    add_common(cmd_verify, verify_args, false);

    auto* cmd_compare = app.add_subcommand("compare-laplacian",
                                           "sweep the drift comparison bound against the model");
    add_common(cmd_compare, compare_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_classify->parsed()) {
            auto cfg = load_and_override(classify_args);
            nlohmann::json j = ccl::run_classify(*cfg);
            std::cout << j.dump(2) << std::endl;
            if (!classify_args.out_prefix.empty())
                ccl::write_text_file(classify_args.out_prefix + ".json", j.dump(2) + "\n");
            return ccl::kExitOk;
        }
        if (cmd_compare->parsed()) {
            auto cfg = load_and_override(compare_args);
            const std::string csv = ccl::run_compare_laplacian(*cfg);
            ccl::write_text_file(compare_args.out_prefix + ".csv", csv);
            std::cout << "wrote " << compare_args.out_prefix << ".csv" << std::endl;
            return ccl::kExitOk;
        }
        if (cmd_run->parsed()) return run_pipeline(run_args, true);
        if (cmd_verify->parsed()) return run_pipeline(verify_args, true);
        if (cmd_solve->parsed()) return run_pipeline(solve_args, false);
    } catch (const ccl::config_error& e) {
        return fail_config(e.what());
    } catch (const ccl::convergence_error& e) {
        std::cerr << "solver failure: " << e.what() << std::endl;
        return ccl::kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return ccl::kExitSolver;
    }
    return ccl::kExitConfig;
}
