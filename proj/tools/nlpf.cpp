#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "nlpf/config.hpp"
#include "nlpf/report.hpp"
#include "nlpf/selftest.hpp"
#include "nlpf/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config;
    std::string backend;
    std::string out_dir = ".";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
    auto* c = cmd->add_option("--config", opts.config, "configuration file");
    if (needs_config) c->required();
    cmd->add_option("--backend", opts.backend, "convolution backend: direct or fft")
        ->check(CLI::IsMember({"direct", "fft"}));
    cmd->add_option("--threads", opts.threads, "worker threads for independent runs")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opts.out_dir, "output directory");
}

void apply_backend(const CommonOpts& opts, nlpf::SolverConfig& solver) {
    if (opts.backend == "direct") solver.backend = nlpf::ConvBackend::direct;
    if (opts.backend == "fft") solver.backend = nlpf::ConvBackend::fft;
}

std::string out_path(const CommonOpts& opts, const std::string& rel) {
    fs::path p(rel);
    if (p.is_absolute()) return rel;
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / p).string();
}

int cmd_run(const CommonOpts& opts) {
    nlpf::RunConfig cfg = nlpf::RunConfig::load(opts.config);
    apply_backend(opts, cfg.solver);

    const nlpf::GridSpec grid = nlpf::make_grid(cfg.domain, cfg.m, cfg.n);
    const nlpf::KernelGrid kernel = nlpf::make_kernel(cfg.kernel, grid);
    const nlpf::ModelParams params =
        nlpf::ModelParams::create(cfg.equation, cfg.M, cfg.gamma_c, cfg.gamma_e, kernel);
    std::printf("model: B_c = %.12g, B_e = %.12g, gamma_0 = %.12g, alpha_0 = %.12g\n",
                params.B_c, params.B_e, params.gamma_0, params.alpha_0);
    const nlpf::Field phi0 = nlpf::make_initial(cfg.init, grid);

    const std::string snap_dir = out_path(opts, cfg.snapshot_dir);
    fs::create_directories(snap_dir);

    nlpf::RunOptions run_opts;
    if (cfg.snapshot_every > 0) {
        run_opts.observer = [&](const nlpf::DiagnosticsRow& row, const nlpf::SchemeState& st) {
            if (row.k % cfg.snapshot_every == 0) {
                char name[64];
                std::snprintf(name, sizeof(name), "snap_%06d.nlpf", row.k);
                nlpf::write_snapshot((fs::path(snap_dir) / name).string(), st.phi_curr, st.t);
            }
        };
    }

    nlpf::RunResult result = nlpf::run(phi0, cfg.T, cfg.s, kernel, params, cfg.solver, run_opts);
    nlpf::write_diagnostics_csv(out_path(opts, cfg.energy_csv), result.series);
    nlpf::write_snapshot((fs::path(snap_dir) / "final.nlpf").string(), result.state.phi_curr,
                         result.state.t);

    std::printf("run complete: %zu steps, t = %s, F = %s, mass deviation = %s\n",
                result.series.size() - 1, nlpf::format_g17(result.state.t).c_str(),
                nlpf::format_g17(result.series.back().F).c_str(),
                nlpf::format_g17(result.series.back().mass_deviation).c_str());
    return 0;
}

int cmd_converge(const CommonOpts& opts) {
    nlpf::StudyConfig cfg = nlpf::StudyConfig::load(opts.config);
    apply_backend(opts, cfg.study.solver);
    cfg.study.threads = opts.threads;

    if (cfg.study.levels.size() < 2)
        std::fprintf(stderr, "warning: single level, error column will be empty\n");

    nlpf::StudyResult result = nlpf::convergence_study(cfg.study);
    nlpf::write_study_csv(out_path(opts, cfg.table_csv), result);
    nlpf::write_study_text(out_path(opts, cfg.table_txt), result);
    std::fputs(nlpf::study_text(result).c_str(), stdout);
    return 0;
}

int cmd_energy_test(const CommonOpts& opts) {
    nlpf::DecayFileConfig cfg = nlpf::DecayFileConfig::load(opts.config);
    apply_backend(opts, cfg.decay.solver);

    nlpf::DiagnosticsSeries series = nlpf::energy_decay_experiment(cfg.decay);
    nlpf::write_diagnostics_csv(out_path(opts, cfg.energy_csv), series);
    std::printf("energy decay verified over %zu steps: F(0) = %s, F(T) = %s\n",
                series.size() - 1, nlpf::format_g17(series.front().F).c_str(),
                nlpf::format_g17(series.back().F).c_str());
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    for (const nlpf::PropertyReport& r : nlpf::run_property_suite()) {
        std::printf("[%s] %-34s cases=%d worst=%.3e tol=%.0e\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.cases, r.worst, r.tol);
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal Allen-Cahn / Cahn-Hilliard convex-splitting solver"};
    app.require_subcommand(1);

    CommonOpts run_opts, converge_opts, energy_opts, self_opts;
    auto* run_cmd = app.add_subcommand("run", "advance one configuration to its final time");
    add_common(run_cmd, run_opts);
    auto* conv_cmd = app.add_subcommand("converge", "linear-refinement convergence study");
    add_common(conv_cmd, converge_opts);
    auto* energy_cmd =
        app.add_subcommand("energy-test", "run and assert monotone pseudo-energy decay");
    add_common(energy_cmd, energy_opts);
    app.add_subcommand("selftest", "randomized property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (conv_cmd->parsed()) return cmd_converge(converge_opts);
        if (energy_cmd->parsed()) return cmd_energy_test(energy_opts);
        return cmd_selftest();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
