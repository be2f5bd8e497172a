#pragma once

#include "nlpf/convolution.hpp"
#include "nlpf/grid.hpp"

namespace nlpf {

enum class Equation { nac, nch };

/// Model constants derived from (gamma_c, gamma_e) and the kernel masses:
///   B_c = [Jc*1] + gamma_c,  B_e = [Je*1] + gamma_e,
///   alpha_0 = B_c - 3 B_e,   gamma_0 = B_c - B_e.
///
/// gamma_0 > 0 (positive, non-degenerate diffusivity) is enforced for nCH.
/// For nAC the pointwise solve needs no such condition and gamma_0 >= 0 is
/// accepted. alpha_0 is recorded only: the scheme converges at the same rate
/// when alpha_0 <= 0, so it is never enforced.
struct ModelParams {
    Equation equation = Equation::nch;
    double M = 1.0;
    double gamma_c = 0.0;
    double gamma_e = 0.0;
    double jc_one = 0.0;
    double je_one = 0.0;
    double B_c = 0.0;
    double B_e = 0.0;
    double alpha_0 = 0.0;
    double gamma_0 = 0.0;

    static ModelParams create(Equation equation, double M, double gamma_c, double gamma_e,
                              const KernelGrid& kernel);
};

/// Discrete energy
///   F(phi) = 1/4 |phi|_4^4 + (gamma_c - gamma_e)/2 |phi|_2^2
///          + [J*1]/2 |phi|_2^2 - h^2/2 <phi, [J*phi]>.
double energy(const Field& phi, const KernelGrid& kernel, const ModelParams& params,
              ConvBackend backend = ConvBackend::automatic);

/// Convex part F_c = 1/4 |phi|_4^4 + B_c/2 |phi|_2^2.
double energy_convex(const Field& phi, const KernelGrid& kernel, const ModelParams& params);

/// Concave part F_e = B_e/2 |phi|_2^2 + h^2/2 <phi, [J*phi]>; F = F_c - F_e.
double energy_concave(const Field& phi, const KernelGrid& kernel, const ModelParams& params,
                      ConvBackend backend = ConvBackend::automatic);

/// Pseudo energy E(phi_k, phi_kp1) = F(phi_kp1)
///   + (B_c + B_e)/4 |d|_2^2 + h^2/4 <[J*d], d>,  d = phi_kp1 - phi_k.
/// The increment term is non-negative, so E >= F(phi_kp1).
double pseudo_energy(const Field& phi_k, const Field& phi_kp1, const KernelGrid& kernel,
                     const ModelParams& params, ConvBackend backend = ConvBackend::automatic);

/// Symmetric second-order cubic term
///   eta(a, b) = 1/4 (a^2 + b^2)(a + b), pointwise; eta(phi, phi) = phi^3.
Field eta(const Field& phi_a, const Field& phi_b);

/// Half-step chemical potential
///   w = eta(phi_k, phi_kp1) + B_c * (phi_k + phi_kp1)/2
///     - B_e * phi_hat - [J * phi_hat],
/// with the secant extrapolation phi_hat = (3/2) phi_k - (1/2) phi_km1.
/// For the first step pass phi_km1 = phi_k.
Field chemical_potential_halfstep(const Field& phi_km1, const Field& phi_k,
                                  const Field& phi_kp1, const KernelGrid& kernel,
                                  const ModelParams& params,
                                  ConvBackend backend = ConvBackend::automatic);

/// A-priori trajectory bound: |phi^k|_4 stays below
///   (8 (F(phi0) + (gamma_c - gamma_e - 2 [Je*1])^2 / 2 * |Omega|))^(1/4)
/// for every step of every run, independent of h and s.
double l4_apriori_bound(const Field& phi0, const KernelGrid& kernel,
                        const ModelParams& params,
                        ConvBackend backend = ConvBackend::automatic);

}  // namespace nlpf
