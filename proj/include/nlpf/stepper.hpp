#pragma once

#include <functional>
#include <vector>

#include "nlpf/energy.hpp"

namespace nlpf {

/// Two-level history (phi^{k-1}, phi^k) required by the secant extrapolation.
/// At k = 0 the convention phi^{-1} = phi^0 applies: prev == curr.
struct SchemeState {
    Field phi_prev;
    Field phi_curr;
    double t = 0.0;
    int k = 0;

    static SchemeState initial(Field phi0) {
        SchemeState s;
        s.phi_prev = phi0;
        s.phi_curr = std::move(phi0);
        return s;
    }
};

enum class Damping { none, line_search_halving };

struct SolverConfig {
    /// Nonlinear residual tolerance in the h-weighted 2-norm, scaled by
    /// max(1, |phi^k|_2) at each step.
    double newton_tol = 1e-11;
    int newton_max_iter = 50;
    /// Inner linear solve stops at this fraction of the current nonlinear
    /// residual.
    double krylov_tol = 1e-4;
    int krylov_max_iter = 200;
    Damping damping = Damping::line_search_halving;
    ConvBackend backend = ConvBackend::automatic;

    void validate() const;
};

struct StepStats {
    int newton_iters = 0;
    int krylov_iters = 0;
    double final_residual = 0.0;
};

/// One step of phi^{k+1} = phi^k - M s w^{k+1/2}. The nonlocal and concave
/// terms are explicit, so the update decouples into one strictly increasing
/// scalar equation per cell, solved by safeguarded Newton with a bisection
/// fallback.
SchemeState step_nac(const SchemeState& state, double s, const KernelGrid& kernel,
                     const ModelParams& params, const SolverConfig& cfg,
                     StepStats* stats = nullptr);

/// One step of phi^{k+1} = phi^k + s Lap_h w^{k+1/2}, solved by Newton with a
/// preconditioned conjugate-gradient inner iteration. The Jacobian
///   v -> v - s Lap_h(c v),  c = 1/4 (3 phi^2 + 2 phi phi^k + (phi^k)^2) + B_c/2 > 0,
/// is similar to an SPD operator under the diagonal similarity sqrt(c); CG runs
/// on that symmetrization with the constant-coefficient preconditioner
/// (I - s kappa Lap_h)^{-1}, kappa = B_c/2 + 3/4 (|phi^k|_inf + eps)^2,
/// inverted exactly in Fourier space.
///
/// `initial_guess` overrides the default extrapolated start (used by the
/// uniqueness probes); pass nullptr for normal stepping.
SchemeState step_nch(const SchemeState& state, double s, const KernelGrid& kernel,
                     const ModelParams& params, const SolverConfig& cfg,
                     const Field* initial_guess = nullptr, StepStats* stats = nullptr);

/// Dispatch on params.equation.
SchemeState step(const SchemeState& state, double s, const KernelGrid& kernel,
                 const ModelParams& params, const SolverConfig& cfg,
                 StepStats* stats = nullptr);

struct DiagnosticsRow {
    int k = 0;
    double t = 0.0;
    double mass_deviation = 0.0;
    double F = 0.0;
    double pseudo_E = 0.0;
    double grad_w_norm_sq = 0.0;
    int newton_iters = 0;
    double final_residual = 0.0;
};

using DiagnosticsSeries = std::vector<DiagnosticsRow>;

struct RunOptions {
    /// Compute F, pseudo E and |grad w|^2 each step (two extra convolutions).
    bool track_energy = true;
    std::function<void(const DiagnosticsRow&, const SchemeState&)> observer;
};

struct RunResult {
    SchemeState state;
    DiagnosticsSeries series;
    double l4_bound = 0.0;
    std::vector<double> l4_norms;
};

/// Advances from t = 0 to T in round(T/s) steps (T must be an integer
/// multiple of s to 1e-12 relative). Emits one diagnostics row per step plus
/// the initial row, monitors the l4 a-priori bound, and for nCH checks mass
/// conservation at every step.
RunResult run(const Field& initial, double T, double s, const KernelGrid& kernel,
              const ModelParams& params, const SolverConfig& cfg,
              const RunOptions& opts = {});

}  // namespace nlpf
