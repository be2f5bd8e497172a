#include "nlpf/harness.hpp"

#include <cmath>
#include <future>
#include <random>
#include <string>

#include "nlpf/snapshot.hpp"

namespace nlpf {

GridSpec make_grid(const DomainSpec& d, int m, int n) {
    return GridSpec::make(d.L1, d.L2, m, n, d.x0, d.y0);
}

KernelGrid make_kernel(const KernelSpec& k, const GridSpec& grid) {
    switch (k.type) {
        case KernelSpec::Type::gaussian:
            return KernelGrid::gaussian(k.alpha, k.sigma, grid, k.images);
        case KernelSpec::Type::dog:
        default:
            return KernelGrid::difference_of_gaussians(k.alpha, k.sigma, k.beta, k.sigma2,
                                                       grid, k.images);
    }
}

Field make_initial(const InitSpec& init, const GridSpec& grid) {
    switch (init.type) {
        case InitSpec::Type::sinusoid: return initial_sinusoid(grid);
        case InitSpec::Type::random:
            return initial_random(grid, init.mean, init.amplitude, init.seed);
        case InitSpec::Type::file:
        default: {
            auto snap = read_snapshot(init.path);
            if (!(snap.field.grid() == grid))
                throw Error("initial data file grid does not match the configured grid");
            return snap.field;
        }
    }
}

Field initial_sinusoid(const GridSpec& grid) {
    Field f(grid, 0.0, FieldRole::state);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int j = 0; j < grid.n; ++j) {
        const double cy = std::cos(two_pi * grid.cell_y(j));
        for (int i = 0; i < grid.m; ++i)
            f(i, j) = 0.5 * std::sin(two_pi * grid.cell_x(i)) * cy;
    }
    return f;
}

Field initial_random(const GridSpec& grid, double mean, double amplitude, std::uint64_t seed) {
    if (!(amplitude > 0.0)) throw Error("initial_random: amplitude must be positive");
    Field f(grid, 0.0, FieldRole::state);
    std::mt19937_64 rng(seed);
    // Map the top 53 bits to [0,1); keeps the values identical across
    // standard libraries, unlike uniform_real_distribution.
    for (double& x : f.values()) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        x = mean + amplitude * (2.0 * u - 1.0);
    }
    double acc = 0.0;
    for (double x : f.values()) acc += x;
    const double shift = mean - acc / double(grid.count());
    for (double& x : f.values()) x += shift;
    return f;
}

Field restrict_field(const Field& fine) {
    const GridSpec& gf = fine.grid();
    if (gf.m % 2 != 0 || gf.n % 2 != 0)
        throw GridMismatchError("restrict_field: fine cell counts must be even");
    const GridSpec gc = GridSpec::make(gf.L1, gf.L2, gf.m / 2, gf.n / 2, gf.x0, gf.y0);
    Field out(gc, 0.0, fine.role);
    for (int j = 0; j < gc.n; ++j)
        for (int i = 0; i < gc.m; ++i) {
            out(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j) +
                                fine(2 * i, 2 * j + 1) + fine(2 * i + 1, 2 * j + 1));
        }
    return out;
}

Field prolongate_field(const Field& coarse) {
    const GridSpec& gc = coarse.grid();
    const GridSpec gf = GridSpec::make(gc.L1, gc.L2, 2 * gc.m, 2 * gc.n, gc.x0, gc.y0);
    Field out(gf, 0.0, coarse.role);
    for (int j = 0; j < gf.n; ++j)
        for (int i = 0; i < gf.m; ++i) out(i, j) = coarse(i / 2, j / 2);
    return out;
}

double cauchy_error(const Field& coarse_final, const Field& fine_final) {
    const GridSpec& gc = coarse_final.grid();
    const GridSpec& gf = fine_final.grid();
    if (gf.m != 2 * gc.m || gf.n != 2 * gc.n || gf.x0 != gc.x0 || gf.y0 != gc.y0 ||
        gf.L1 != gc.L1 || gf.L2 != gc.L2)
        throw GridMismatchError("cauchy_error: grids do not nest 2:1");
    const Field restricted = restrict_field(fine_final);
    Field diff(gc);
    for (std::size_t k = 0; k < diff.size(); ++k)
        diff.data()[k] = coarse_final.data()[k] - restricted.data()[k];
    return norm_p(diff, 2.0);
}

namespace {

LevelRun run_level(const StudySpec& spec, int m, Field* final_out) {
    const GridSpec grid = make_grid(spec.domain, m, m);
    const KernelGrid kernel = make_kernel(spec.kernel, grid);
    const ModelParams params =
        ModelParams::create(spec.equation, spec.M, spec.gamma_c, spec.gamma_e, kernel);
    const Field phi0 = make_initial(spec.init, grid);
    const double s = spec.refinement_c * grid.h;
    RunResult r = run(phi0, spec.T, s, kernel, params, spec.solver);
    LevelRun lr;
    lr.m = m;
    lr.s = s;
    lr.series = std::move(r.series);
    lr.l4_bound = r.l4_bound;
    lr.l4_norms = std::move(r.l4_norms);
    *final_out = std::move(r.state.phi_curr);
    return lr;
}

}  // namespace

StudyResult convergence_study(const StudySpec& spec) {
    if (spec.levels.size() < 1) throw Error("convergence_study: need at least one level");
    for (std::size_t i = 1; i < spec.levels.size(); ++i)
        if (spec.levels[i] != 2 * spec.levels[i - 1])
            throw Error("convergence_study: consecutive levels must double, got " +
                        std::to_string(spec.levels[i - 1]) + " -> " +
                        std::to_string(spec.levels[i]));

    std::vector<Field> finals(spec.levels.size());
    StudyResult result;
    result.runs.resize(spec.levels.size());

    if (spec.threads > 1) {
        std::vector<std::future<LevelRun>> futures;
        futures.reserve(spec.levels.size());
        for (std::size_t i = 0; i < spec.levels.size(); ++i) {
            futures.push_back(std::async(std::launch::async, run_level, std::cref(spec),
                                         spec.levels[i], &finals[i]));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) result.runs[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < spec.levels.size(); ++i)
            result.runs[i] = run_level(spec, spec.levels[i], &finals[i]);
    }

    for (std::size_t i = 0; i + 1 < spec.levels.size(); ++i) {
        StudyLevelRow row;
        row.coarse_m = spec.levels[i];
        row.fine_m = spec.levels[i + 1];
        row.coarse_h = spec.domain.L1 / row.coarse_m;
        row.fine_h = spec.domain.L1 / row.fine_m;
        row.error = cauchy_error(finals[i], finals[i + 1]);
        if (!result.rows.empty() && result.rows.back().error > 0.0 && row.error > 0.0)
            row.rate = std::log2(result.rows.back().error / row.error);
        result.rows.push_back(row);
    }
    return result;
}

DiagnosticsSeries energy_decay_experiment(const DecayConfig& config) {
    const GridSpec grid = make_grid(config.domain, config.m, config.n);
    const KernelGrid kernel = make_kernel(config.kernel, grid);
    const ModelParams params =
        ModelParams::create(config.equation, config.M, config.gamma_c, config.gamma_e, kernel);
    const Field phi0 = make_initial(config.init, grid);
    RunResult r = run(phi0, config.T, config.s, kernel, params, config.solver);

    const double slack = 10.0 * config.solver.newton_tol;
    for (std::size_t k = 1; k < r.series.size(); ++k) {
        if (r.series[k].pseudo_E > r.series[k - 1].pseudo_E + slack)
            throw SolverError("energy_decay_experiment: pseudo energy increased at step " +
                              std::to_string(r.series[k].k),
                              r.series[k].k, r.series[k].pseudo_E - r.series[k - 1].pseudo_E);
    }
    return r.series;
}

}  // namespace nlpf
