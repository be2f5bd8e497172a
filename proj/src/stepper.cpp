#include "nlpf/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlpf/fft.hpp"

namespace nlpf {

void SolverConfig::validate() const {
    if (!(newton_tol > 0.0) || !(krylov_tol > 0.0))
        throw Error("SolverConfig: tolerances must be positive");
    if (newton_max_iter < 1 || krylov_max_iter < 1)
        throw Error("SolverConfig: iteration limits must be >= 1");
}

namespace {

double norm2_h(const Field& f) {
    double acc = 0.0;
    for (double x : f.values()) acc += x * x;
    return std::sqrt(f.grid().h * f.grid().h * acc);
}

double raw_dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Explicit data shared by both schemes:
//   phi_hat = (3/2) phi^k - (1/2) phi^{k-1}
//   w_expl  = (B_c/2) phi^k - B_e phi_hat - [J * phi_hat]
struct ExplicitPart {
    Field phi_hat;
    Field w_expl;
};

ExplicitPart build_explicit(const SchemeState& state, const KernelGrid& kernel,
                            const ModelParams& params, ConvBackend backend) {
    const Field& pk = state.phi_curr;
    const Field& pm = state.phi_prev;
    ExplicitPart e{Field(pk.grid()), Field(pk.grid())};
    // 3/2 phi^k - 1/2 phi^{k-1}, written so that equal history levels give
    // exactly phi^k.
    for (std::size_t i = 0; i < pk.size(); ++i)
        e.phi_hat.data()[i] = pk.data()[i] + 0.5 * (pk.data()[i] - pm.data()[i]);
    conv_apply(kernel, KernelPart::combined, e.phi_hat, e.w_expl, backend);
    for (std::size_t i = 0; i < pk.size(); ++i) {
        e.w_expl.data()[i] = 0.5 * params.B_c * pk.data()[i] -
                             params.B_e * e.phi_hat.data()[i] - e.w_expl.data()[i];
    }
    return e;
}

// Scalar equation of the nAC update at one cell:
//   g(x) = x + a (1/4 (pk^2 + x^2)(pk + x) + (B_c/2) x) - r,  a = M s.
// g' >= 1, so the root is unique; Newton is safeguarded by the bracket the
// iterates themselves build, with bisection whenever a step leaves it.
double solve_scalar_nac(double pk, double r, double a, double half_bc, double guess,
                        double tol, int max_iter, double* residual_out) {
    double x = guess;
    double lo = 0.0, hi = 0.0;
    bool has_lo = false, has_hi = false;
    double g = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        g = x + a * (0.25 * (pk * pk + x * x) * (pk + x) + half_bc * x) - r;
        if (std::abs(g) <= tol) {
            if (residual_out) *residual_out = std::abs(g);
            return x;
        }
        if (g > 0.0) {
            hi = x;
            has_hi = true;
        } else {
            lo = x;
            has_lo = true;
        }
        const double gp = 1.0 + a * (0.25 * (3.0 * x * x + 2.0 * x * pk + pk * pk) + half_bc);
        double next = x - g / gp;
        if (has_lo && has_hi && (next <= lo || next >= hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    if (residual_out) *residual_out = std::abs(g);
    return x;
}

// Exact Fourier inverse of (I - s kappa Lap_h) using the five-point symbol.
class HelmholtzSolver {
public:
    HelmholtzSolver(const GridSpec& g, double s_kappa)
        : dft_(Dft2::get(g.m, g.n)), denom_(dft_->spectrum_size()), spec_(dft_->spectrum_size()) {
        const int sm = dft_->spec_m();
        const double inv_h2 = 1.0 / (g.h * g.h);
        const double pi = 3.14159265358979323846;
        for (int q = 0; q < g.n; ++q) {
            const double sy = std::sin(pi * q / g.n);
            for (int p = 0; p < sm; ++p) {
                const double sx = std::sin(pi * p / g.m);
                const double lam = 4.0 * inv_h2 * (sx * sx + sy * sy);
                denom_[std::size_t(q) * sm + p] = 1.0 / (1.0 + s_kappa * lam);
            }
        }
    }

    void apply(std::span<const double> in, std::span<double> out) {
        dft_->forward(in, spec_);
        for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] *= denom_[i];
        dft_->inverse(spec_, out);
    }

private:
    std::shared_ptr<const Dft2> dft_;
    std::vector<double> denom_;
    std::vector<std::complex<double>> spec_;
};

// PCG on the symmetrized Newton system (I + s W L W) x = W b, W = diag(sqrt c),
// L = -Lap_h; returns delta = x / sqrt(c). Stops at |r|_2 <= rel_tol |W b|_2.
struct PcgResult {
    bool converged = false;
    int iters = 0;
};

PcgResult pcg_solve(const Field& sqrt_c, double s, const Field& rhs, double rel_tol,
                    int max_iter, HelmholtzSolver& precond, Field& delta, Field& scratch_a,
                    Field& scratch_b) {
    const GridSpec& g = rhs.grid();
    const std::size_t nn = g.count();
    const double* w = sqrt_c.data();

    std::vector<double> x(nn, 0.0), r(nn), z(nn), p(nn), q(nn);
    for (std::size_t i = 0; i < nn; ++i) r[i] = w[i] * rhs.data()[i];

    const double stop = rel_tol * std::sqrt(raw_dot(r, r));
    auto apply_op = [&](const double* v, double* out) {
        double* t = scratch_a.data();
        for (std::size_t i = 0; i < nn; ++i) t[i] = w[i] * v[i];
        laplacian(scratch_a, scratch_b);
        const double* lt = scratch_b.data();
        for (std::size_t i = 0; i < nn; ++i) out[i] = v[i] - s * w[i] * lt[i];
    };

    PcgResult res;
    double rnorm = std::sqrt(raw_dot(r, r));
    if (rnorm <= stop || rnorm == 0.0) {
        res.converged = true;
    } else {
        precond.apply(r, z);
        p = z;
        double rz = raw_dot(r, z);
        for (int it = 1; it <= max_iter; ++it) {
            apply_op(p.data(), q.data());
            const double pq = raw_dot(p, q);
            if (!(pq > 0.0)) break;  // loss of positive definiteness: bail out
            const double alpha = rz / pq;
            for (std::size_t i = 0; i < nn; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            res.iters = it;
            rnorm = std::sqrt(raw_dot(r, r));
            if (rnorm <= stop) {
                res.converged = true;
                break;
            }
            precond.apply(r, z);
            const double rz_new = raw_dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < nn; ++i) p[i] = z[i] + beta * p[i];
        }
    }
    for (std::size_t i = 0; i < nn; ++i) delta.data()[i] = x[i] / w[i];
    return res;
}

}  // namespace

SchemeState step_nac(const SchemeState& state, double s, const KernelGrid& kernel,
                     const ModelParams& params, const SolverConfig& cfg, StepStats* stats) {
    cfg.validate();
    if (!(s > 0.0)) throw Error("step_nac: s must be positive");
    const ConvBackend backend = cfg.backend;
    const Field& pk = state.phi_curr;
    ExplicitPart expl = build_explicit(state, kernel, params, backend);

    const double a = params.M * s;
    const double half_bc = 0.5 * params.B_c;
    Field next(pk.grid(), 0.0, FieldRole::state);
    double worst = 0.0;
    for (std::size_t i = 0; i < pk.size(); ++i) {
        const double r = pk.data()[i] - a * expl.w_expl.data()[i];
        double res = 0.0;
        next.data()[i] = solve_scalar_nac(pk.data()[i], r, a, half_bc, expl.phi_hat.data()[i],
                                          cfg.newton_tol, 100, &res);
        worst = std::max(worst, res);
    }
    if (worst > cfg.newton_tol)
        throw SolverError("step_nac: pointwise Newton failed, worst residual " +
                          std::to_string(worst), state.k, worst);
    if (!next.all_finite())
        throw SolverError("step_nac: non-finite state", state.k, worst);

    if (stats) {
        stats->newton_iters = 1;
        stats->krylov_iters = 0;
        stats->final_residual = worst;
    }
    SchemeState out;
    out.phi_prev = state.phi_curr;
    out.phi_curr = std::move(next);
    out.t = state.t + s;
    out.k = state.k + 1;
    return out;
}

SchemeState step_nch(const SchemeState& state, double s, const KernelGrid& kernel,
                     const ModelParams& params, const SolverConfig& cfg,
                     const Field* initial_guess, StepStats* stats) {
    cfg.validate();
    if (!(s > 0.0)) throw Error("step_nch: s must be positive");
    const ConvBackend backend = cfg.backend;
    const GridSpec& g = state.phi_curr.grid();
    const std::size_t nn = g.count();
    const Field& pk = state.phi_curr;
    ExplicitPart expl = build_explicit(state, kernel, params, backend);

    const double half_bc = 0.5 * params.B_c;
    const double tol = cfg.newton_tol * std::max(1.0, norm2_h(pk));

    Field phi = initial_guess ? *initial_guess : expl.phi_hat;
    if (initial_guess) require_same_grid(phi.grid(), g, "step_nch initial guess");

    Field residual(g), trial_residual(g), w_arg(g), lap_out(g);
    Field sqrt_c(g), delta(g), scratch_a(g), scratch_b(g), trial(g);

    auto eval_residual = [&](const Field& ph, Field& out) {
        const double* x = ph.data();
        const double* k0 = pk.data();
        double* wa = w_arg.data();
        for (std::size_t i = 0; i < nn; ++i) {
            wa[i] = 0.25 * (k0[i] * k0[i] + x[i] * x[i]) * (k0[i] + x[i]) + half_bc * x[i] +
                    expl.w_expl.data()[i];
        }
        laplacian(w_arg, lap_out);
        for (std::size_t i = 0; i < nn; ++i)
            out.data()[i] = x[i] - k0[i] - s * lap_out.data()[i];
    };

    const double kappa = half_bc + 0.75 * (norm_inf(pk) + 1e-8) * (norm_inf(pk) + 1e-8);
    HelmholtzSolver precond(g, s * kappa);

    int newton_iters = 0;
    int krylov_total = 0;
    double rn = 0.0;
    bool converged = false;
    std::string history;

    eval_residual(phi, residual);
    rn = norm2_h(residual);
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        if (!std::isfinite(rn))
            throw SolverError("step_nch: non-finite residual", state.k, rn);
        if (rn <= tol) {
            converged = true;
            break;
        }
        history += (history.empty() ? "" : " ") + std::to_string(rn);

        const double* x = phi.data();
        const double* k0 = pk.data();
        for (std::size_t i = 0; i < nn; ++i) {
            const double c = 0.25 * (3.0 * x[i] * x[i] + 2.0 * x[i] * k0[i] + k0[i] * k0[i]) +
                             half_bc;
            sqrt_c.data()[i] = std::sqrt(c);
        }
        Field neg_r(g);
        for (std::size_t i = 0; i < nn; ++i) neg_r.data()[i] = -residual.data()[i];
        PcgResult lin = pcg_solve(sqrt_c, s, neg_r, cfg.krylov_tol, cfg.krylov_max_iter,
                                  precond, delta, scratch_a, scratch_b);
        krylov_total += lin.iters;
        ++newton_iters;

        // A failed inner solve forces the damped path; the step direction is
        // still a descent direction for the convex increment functional.
        const bool must_damp = !lin.converged || cfg.damping == Damping::line_search_halving;
        double step_len = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 9; ++halving) {
            for (std::size_t i = 0; i < nn; ++i)
                trial.data()[i] = phi.data()[i] + step_len * delta.data()[i];
            eval_residual(trial, trial_residual);
            const double trial_rn = norm2_h(trial_residual);
            if (!must_damp || trial_rn < rn || trial_rn <= tol) {
                std::swap(phi, trial);
                std::swap(residual, trial_residual);
                rn = trial_rn;
                accepted = true;
                break;
            }
            step_len *= 0.5;
        }
        if (!accepted)
            throw SolverError("step_nch: line search stalled at step " +
                              std::to_string(state.k) + ", residual history [" + history + "]",
                              state.k, rn);
    }
    if (!converged)
        throw SolverError("step_nch: Newton did not reach tolerance at step " +
                          std::to_string(state.k) + ", residual history [" + history + "]",
                          state.k, rn);
    if (!phi.all_finite()) throw SolverError("step_nch: non-finite state", state.k, rn);

    if (stats) {
        stats->newton_iters = newton_iters;
        stats->krylov_iters = krylov_total;
        stats->final_residual = rn;
    }
    phi.role = FieldRole::state;
    SchemeState out;
    out.phi_prev = state.phi_curr;
    out.phi_curr = std::move(phi);
    out.t = state.t + s;
    out.k = state.k + 1;
    return out;
}

SchemeState step(const SchemeState& state, double s, const KernelGrid& kernel,
                 const ModelParams& params, const SolverConfig& cfg, StepStats* stats) {
    return params.equation == Equation::nac
               ? step_nac(state, s, kernel, params, cfg, stats)
               : step_nch(state, s, kernel, params, cfg, nullptr, stats);
}

RunResult run(const Field& initial, double T, double s, const KernelGrid& kernel,
              const ModelParams& params, const SolverConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    if (!(T > 0.0) || !(s > 0.0)) throw Error("run: T and s must be positive");
    const long long steps = std::llround(T / s);
    if (steps < 1 || std::abs(T - double(steps) * s) > 1e-12 * T)
        throw Error("run: T = " + std::to_string(T) + " is not an integer multiple of s = " +
                    std::to_string(s));

    const double h2 = initial.grid().h * initial.grid().h;
    auto mass_of = [&](const Field& f) {
        double acc = 0.0;
        for (double x : f.values()) acc += x;
        return h2 * acc;
    };

    RunResult result;
    result.state = SchemeState::initial(initial);
    result.l4_bound = l4_apriori_bound(initial, kernel, params, cfg.backend);
    const double mass0 = mass_of(initial);

    auto record = [&](DiagnosticsRow row, const SchemeState& st) {
        result.series.push_back(row);
        result.l4_norms.push_back(norm_p(st.phi_curr, 4.0));
        if (result.l4_norms.back() > result.l4_bound * (1.0 + 1e-9))
            throw SolverError("run: l4 a-priori bound violated at step " + std::to_string(row.k),
                              row.k, result.l4_norms.back());
        if (params.equation == Equation::nch && std::abs(row.mass_deviation) > 1e-9)
            throw SolverError("run: mass conservation violated at step " + std::to_string(row.k),
                              row.k, row.mass_deviation);
        if (opts.observer) opts.observer(row, st);
    };

    DiagnosticsRow row0;
    row0.F = opts.track_energy ? energy(initial, kernel, params, cfg.backend) : 0.0;
    row0.pseudo_E = row0.F;
    record(row0, result.state);

    for (long long k = 1; k <= steps; ++k) {
        StepStats stats;
        SchemeState next = params.equation == Equation::nac
                               ? step_nac(result.state, s, kernel, params, cfg, &stats)
                               : step_nch(result.state, s, kernel, params, cfg, nullptr, &stats);

        DiagnosticsRow row;
        row.k = int(k);
        row.t = next.t;
        row.mass_deviation = mass_of(next.phi_curr) - mass0;
        row.newton_iters = stats.newton_iters;
        row.final_residual = stats.final_residual;
        if (opts.track_energy) {
            row.F = energy(next.phi_curr, kernel, params, cfg.backend);
            row.pseudo_E = pseudo_energy(result.state.phi_curr, next.phi_curr, kernel, params,
                                         cfg.backend);
            const Field w = chemical_potential_halfstep(result.state.phi_prev,
                                                        result.state.phi_curr, next.phi_curr,
                                                        kernel, params, cfg.backend);
            row.grad_w_norm_sq = grad_norm_sq(w);
        }
        result.state = std::move(next);
        record(row, result.state);
    }
    return result;
}

}  // namespace nlpf
