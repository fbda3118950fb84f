#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "dot/runner.hpp"

namespace {

// exit codes: 0 success, 2 validation failure, 3 numerical failure
int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain diffuse optical tomography: simulate, reconstruct, report"};
    app.require_subcommand(1);

    std::string config_path, data_path, out_dir, hyperprior, prior, report_out = "report.csv";
    std::string reference_path;
    std::optional<unsigned long> seed;
    std::optional<int> max_outer;
    std::vector<std::string> run_dirs;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file")->required();
        cmd->add_option("--seed", seed, "override noise seed");
        cmd->add_option("--out", out_dir, "override output directory");
        cmd->add_option("--max-outer", max_outer, "override outer iteration cap");
        cmd->add_option("--hyperprior", hyperprior,
                        "override hyperprior kind (fixed|exponential|standard-gamma|inverse-gamma)");
        cmd->add_option("--prior", prior, "override prior kind (uncorrelated|difference)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "simulate noisy boundary data");
    add_overrides(sim);

    CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct optical images from data");
    add_overrides(rec);
    rec->add_option("--data", data_path, "measurement CSV")->required();

    CLI::App* rep = app.add_subcommand("report", "relative-error and convergence report");
    rep->add_option("--runs", run_dirs, "run directories")->required();
    rep->add_option("--out", report_out, "report CSV path");
    rep->add_option("--reference", reference_path, "reference state file for convergence");

    CLI11_PARSE(app, argc, argv);

    auto apply_overrides = [&](dot::RunConfig& cfg) {
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (max_outer) cfg.solver.max_outer = *max_outer;
        if (!hyperprior.empty()) cfg.hyper.kind = dot::hyperprior_kind_from_string(hyperprior);
        if (!prior.empty()) {
            if (prior == "uncorrelated")
                cfg.prior_kind = dot::PriorModel::Kind::Uncorrelated;
            else if (prior == "difference")
                cfg.prior_kind = dot::PriorModel::Kind::Difference;
            else
                throw std::invalid_argument("unknown prior kind: " + prior);
        }
    };

    if (sim->parsed())
        return guarded([&] {
            dot::RunConfig cfg = dot::load_config(config_path);
            apply_overrides(cfg);
            dot::cmd_simulate(cfg);
        });
    if (rec->parsed())
        return guarded([&] {
            dot::RunConfig cfg = dot::load_config(config_path);
            apply_overrides(cfg);
            dot::cmd_reconstruct(cfg, data_path);
        });
    return guarded([&] { dot::cmd_report(run_dirs, report_out, reference_path); });
}
