#pragma once

#include <optional>
#include <vector>

#include "nlpf/setup.hpp"
#include "nlpf/stepper.hpp"

namespace nlpf {

/// phi0(x, y) = 0.5 sin(2 pi x) cos(2 pi y) at cell centers.
Field initial_sinusoid(const GridSpec& grid);

/// mean + amplitude * uniform(-1, 1) per cell, deterministic in seed, then
/// shifted so the discrete mean is exactly `mean`.
Field initial_random(const GridSpec& grid, double mean, double amplitude, std::uint64_t seed);

/// 2x2 cell average onto the nested coarse grid (fine counts must be exactly
/// twice the coarse counts). Mean-preserving: h_c^2 <out, 1> = h_f^2 <in, 1>.
Field restrict_field(const Field& fine);

/// Piecewise-constant refinement: each coarse cell fills its 2x2 fine block.
Field prolongate_field(const Field& coarse);

/// |coarse - restrict(fine)|_2 on the coarse grid.
double cauchy_error(const Field& coarse_final, const Field& fine_final);

struct StudyLevelRow {
    int coarse_m = 0, fine_m = 0;
    double coarse_h = 0.0, fine_h = 0.0;
    double error = 0.0;
    std::optional<double> rate;  // log2(prev error / this error), absent on the first row
};

struct StudySpec {
    Equation equation = Equation::nch;
    DomainSpec domain;
    KernelSpec kernel;
    double gamma_c = 0.0;
    double gamma_e = 1.0;
    double M = 1.0;
    std::vector<int> levels;       // consecutive entries must double
    double refinement_c = 0.1;     // linear refinement path s = C h
    double T = 0.015625;
    InitSpec init;
    SolverConfig solver;
    int threads = 1;
};

struct LevelRun {
    int m = 0;
    double s = 0.0;
    DiagnosticsSeries series;
    double l4_bound = 0.0;
    std::vector<double> l4_norms;
};

struct StudyResult {
    std::vector<StudyLevelRow> rows;
    std::vector<LevelRun> runs;  // per-level diagnostics for invariant checks
};

/// Runs every level to time T with s = C h, restricts each finer solution onto
/// the previous level and fills the error/rate table. Levels are independent
/// and execute concurrently when spec.threads > 1.
StudyResult convergence_study(const StudySpec& spec);

struct DecayConfig {
    Equation equation = Equation::nac;
    DomainSpec domain{-10.0, -10.0, 20.0, 20.0};
    KernelSpec kernel;
    double gamma_c = 0.0;
    double gamma_e = 0.0;
    double M = 1.0;
    int m = 128, n = 128;
    double s = 0.01;
    double T = 10.0;
    InitSpec init;
    SolverConfig solver;
};

/// Full run that asserts the pseudo-energy sequence is non-increasing within
/// solver tolerance; returns the diagnostics series.
DiagnosticsSeries energy_decay_experiment(const DecayConfig& config);

}  // namespace nlpf
