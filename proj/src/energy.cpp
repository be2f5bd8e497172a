#include "nlpf/energy.hpp"

#include <cmath>
#include <string>

namespace nlpf {

ModelParams ModelParams::create(Equation equation, double M, double gamma_c, double gamma_e,
                                const KernelGrid& kernel) {
    if (!(M >= 0.0)) throw Error("ModelParams: M must be >= 0");
    if (!(gamma_c >= 0.0) || !(gamma_e >= 0.0))
        throw Error("ModelParams: gamma_c and gamma_e must be >= 0");
    ModelParams p;
    p.equation = equation;
    p.M = M;
    p.gamma_c = gamma_c;
    p.gamma_e = gamma_e;
    p.jc_one = kernel.jc_one();
    p.je_one = kernel.je_one();
    p.B_c = p.jc_one + gamma_c;
    p.B_e = p.je_one + gamma_e;
    p.alpha_0 = p.B_c - 3.0 * p.B_e;
    p.gamma_0 = p.B_c - p.B_e;
    const bool ok = equation == Equation::nch ? p.gamma_0 > 0.0 : p.gamma_0 >= 0.0;
    if (!ok) {
        throw Error("ModelParams: positivity condition violated, gamma_0 = gamma_c - gamma_e "
                    "+ [Jc*1] - [Je*1] = " + std::to_string(p.gamma_0) +
                    (equation == Equation::nch ? " must be > 0" : " must be >= 0"));
    }
    return p;
}

namespace {

double sum_sq(const Field& a) {
    double acc = 0.0;
    for (double x : a.values()) acc += x * x;
    return acc;
}

double sum_p4(const Field& a) {
    double acc = 0.0;
    for (double x : a.values()) {
        const double x2 = x * x;
        acc += x2 * x2;
    }
    return acc;
}

}  // namespace

double energy(const Field& phi, const KernelGrid& kernel, const ModelParams& params,
              ConvBackend backend) {
    require_same_grid(phi.grid(), kernel.grid(), "energy");
    const double h2 = phi.grid().h * phi.grid().h;
    const double j_one = params.jc_one - params.je_one;
    const Field jphi = conv_apply(kernel, KernelPart::combined, phi, backend);
    return 0.25 * h2 * sum_p4(phi) +
           0.5 * (params.gamma_c - params.gamma_e + j_one) * h2 * sum_sq(phi) -
           0.5 * h2 * inner_product(phi, jphi);
}

double energy_convex(const Field& phi, const KernelGrid& kernel, const ModelParams& params) {
    require_same_grid(phi.grid(), kernel.grid(), "energy_convex");
    const double h2 = phi.grid().h * phi.grid().h;
    return 0.25 * h2 * sum_p4(phi) + 0.5 * params.B_c * h2 * sum_sq(phi);
}

double energy_concave(const Field& phi, const KernelGrid& kernel, const ModelParams& params,
                      ConvBackend backend) {
    require_same_grid(phi.grid(), kernel.grid(), "energy_concave");
    const double h2 = phi.grid().h * phi.grid().h;
    const Field jphi = conv_apply(kernel, KernelPart::combined, phi, backend);
    return 0.5 * params.B_e * h2 * sum_sq(phi) + 0.5 * h2 * inner_product(phi, jphi);
}

double pseudo_energy(const Field& phi_k, const Field& phi_kp1, const KernelGrid& kernel,
                     const ModelParams& params, ConvBackend backend) {
    require_same_grid(phi_k.grid(), phi_kp1.grid(), "pseudo_energy");
    Field diff(phi_k.grid());
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff.data()[i] = phi_kp1.data()[i] - phi_k.data()[i];
    const double h2 = phi_k.grid().h * phi_k.grid().h;
    const Field jdiff = conv_apply(kernel, KernelPart::combined, diff, backend);
    return energy(phi_kp1, kernel, params, backend) +
           0.25 * (params.B_c + params.B_e) * h2 * sum_sq(diff) +
           0.25 * h2 * inner_product(jdiff, diff);
}

Field eta(const Field& phi_a, const Field& phi_b) {
    require_same_grid(phi_a.grid(), phi_b.grid(), "eta");
    Field out(phi_a.grid());
    const double* a = phi_a.data();
    const double* b = phi_b.data();
    double* o = out.data();
    for (std::size_t i = 0; i < out.size(); ++i)
        o[i] = 0.25 * (a[i] * a[i] + b[i] * b[i]) * (a[i] + b[i]);
    return out;
}

Field chemical_potential_halfstep(const Field& phi_km1, const Field& phi_k,
                                  const Field& phi_kp1, const KernelGrid& kernel,
                                  const ModelParams& params, ConvBackend backend) {
    require_same_grid(phi_km1.grid(), phi_k.grid(), "chemical_potential_halfstep");
    require_same_grid(phi_k.grid(), phi_kp1.grid(), "chemical_potential_halfstep");
    const GridSpec& g = phi_k.grid();
    Field phi_hat(g);
    for (std::size_t i = 0; i < phi_hat.size(); ++i)
        phi_hat.data()[i] = phi_k.data()[i] + 0.5 * (phi_k.data()[i] - phi_km1.data()[i]);
    const Field jhat = conv_apply(kernel, KernelPart::combined, phi_hat, backend);
    Field w = eta(phi_k, phi_kp1);
    w.role = FieldRole::potential;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w.data()[i] += 0.5 * params.B_c * (phi_k.data()[i] + phi_kp1.data()[i]) -
                       params.B_e * phi_hat.data()[i] - jhat.data()[i];
    }
    return w;
}

double l4_apriori_bound(const Field& phi0, const KernelGrid& kernel, const ModelParams& params,
                        ConvBackend backend) {
    const double c = params.gamma_c - params.gamma_e - 2.0 * params.je_one;
    const double shift = 0.5 * c * c * phi0.grid().area();
    const double f0 = energy(phi0, kernel, params, backend);
    return std::pow(8.0 * (f0 + shift), 0.25);
}

}  // namespace nlpf
