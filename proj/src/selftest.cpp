#include "nlpf/selftest.hpp"

#include <cmath>
#include <random>

#include "nlpf/convolution.hpp"
#include "nlpf/energy.hpp"

namespace nlpf {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) {
        const double u = double(gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    Field field(const GridSpec& g, double lo = -1.0, double hi = 1.0) {
        Field f(g);
        for (double& x : f.values()) x = uniform(lo, hi);
        return f;
    }
    // Non-negative samples with exact even symmetry f[k][l] = f[-k][-l].
    std::vector<double> even_kernel(const GridSpec& g) {
        std::vector<double> f(g.count(), 0.0);
        for (int l = 0; l < g.n; ++l)
            for (int k = 0; k < g.m; ++k) {
                const int kr = (g.m - k) % g.m;
                const int lr = (g.n - l) % g.n;
                const std::size_t a = std::size_t(l) * g.m + k;
                const std::size_t b = std::size_t(lr) * g.m + kr;
                if (b < a)
                    f[a] = f[b];
                else
                    f[a] = uniform(0.0, 1.0);
            }
        return f;
    }

private:
    std::mt19937_64 gen_;
};

double rel_diff(double a, double b) {
    return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300);
}

struct Suite {
    Rng rng;
    std::vector<PropertyReport> reports;

    explicit Suite(std::uint64_t seed) : rng(seed) {}

    void record(const std::string& name, int cases, double worst, double tol) {
        reports.push_back({name, cases, worst, tol, worst <= tol});
    }
};

GridSpec pick_grid(Rng& rng, int c) {
    switch (c % 3) {
        case 0: return GridSpec::make(1.0, 1.0, 16, 16);
        case 1: return GridSpec::make(1.5, 1.0, 24, 16, -0.75, rng.uniform(-1.0, 1.0));
        default: return GridSpec::make(2.0, 2.0, 20, 20, -1.0, -1.0);
    }
}

void grid_identities(Suite& s, int cases) {
    double sbp_x = 0.0, sbp_y = 0.0, green1 = 0.0, green2 = 0.0;
    double lap_mean = 0.0, inv_ineq = 0.0, grad_identity = 0.0;
    for (int c = 0; c < cases; ++c) {
        const GridSpec g = pick_grid(s.rng, c);
        const Field phi = s.rng.field(g);
        const Field psi = s.rng.field(g);
        const double h2 = g.h * g.h;

        EdgeFieldEW few(g);
        for (double& x : few.v) x = s.rng.uniform(-1.0, 1.0);
        EdgeFieldNS fns(g);
        for (double& x : fns.v) x = s.rng.uniform(-1.0, 1.0);

        sbp_x = std::max(sbp_x, rel_diff(h2 * inner_product(diff_x(phi), few),
                                         -h2 * inner_product(phi, diff_x_adjoint(few))));
        sbp_y = std::max(sbp_y, rel_diff(h2 * inner_product(diff_y(phi), fns),
                                         -h2 * inner_product(phi, diff_y_adjoint(fns))));

        const Field lap_psi = laplacian(psi);
        green1 = std::max(green1,
                          rel_diff(h2 * inner_product(diff_x(phi), diff_x(psi)) +
                                       h2 * inner_product(diff_y(phi), diff_y(psi)),
                                   -h2 * inner_product(phi, lap_psi)));
        green2 = std::max(green2, rel_diff(h2 * inner_product(phi, lap_psi),
                                           h2 * inner_product(laplacian(phi), psi)));
        grad_identity = std::max(grad_identity, rel_diff(grad_norm_sq(phi),
                                                         -h2 * inner_product(phi, laplacian(phi))));

        const Field lap_phi = laplacian(phi);
        double raw_sum = 0.0, abs_sum = 0.0;
        for (double x : lap_phi.values()) {
            raw_sum += x;
            abs_sum += std::abs(x);
        }
        lap_mean = std::max(lap_mean, std::abs(raw_sum) / (abs_sum + 1e-300));

        for (double p : {2.0, 4.0}) {
            const double bound = std::pow(g.h, -2.0 / p) * norm_p(phi, p);
            inv_ineq = std::max(inv_ineq, (norm_inf(phi) - bound) / (bound + 1e-300));
        }
    }
    s.record("summation_by_parts_x", cases, sbp_x, 1e-11);
    s.record("summation_by_parts_y", cases, sbp_y, 1e-11);
    s.record("green_first_identity", cases, green1, 1e-11);
    s.record("green_second_identity", cases, green2, 1e-11);
    s.record("grad_norm_identity", cases, grad_identity, 1e-12);
    s.record("laplacian_zero_mean", cases, lap_mean, 1e-12);
    s.record("inverse_inequality", cases, inv_ineq, 1e-13);
}

void convolution_identities(Suite& s, int cases) {
    double exchange = 0.0, young = 0.0, backend = 0.0, translation_direct = 0.0,
           translation_fft = 0.0;
    for (int c = 0; c < cases; ++c) {
        const GridSpec g = pick_grid(s.rng, c);
        const KernelGrid kernel =
            KernelGrid::from_samples(g, s.rng.even_kernel(g), s.rng.even_kernel(g));
        const Field phi = s.rng.field(g);
        const Field psi = s.rng.field(g);

        for (KernelPart part : {KernelPart::convex, KernelPart::concave}) {
            const double lhs =
                inner_product(phi, conv_apply(kernel, part, psi, ConvBackend::direct));
            const double rhs =
                inner_product(psi, conv_apply(kernel, part, phi, ConvBackend::direct));
            exchange = std::max(exchange, rel_diff(lhs, rhs));

            for (double alpha : {0.5, 1.0, 2.0}) {
                const double bound = kernel.one(part) *
                                     (0.5 * alpha * inner_product(phi, phi) +
                                      0.5 / alpha * inner_product(psi, psi));
                young = std::max(young, (std::abs(lhs) - bound) / (std::abs(bound) + 1e-300));
            }
        }

        const Field direct = conv_apply(kernel, KernelPart::combined, phi, ConvBackend::direct);
        const Field fft = conv_apply(kernel, KernelPart::combined, phi, ConvBackend::fft);
        const double scale =
            std::max(1.0, (kernel.jc_one() + kernel.je_one()) * norm_inf(phi));
        for (std::size_t i = 0; i < direct.size(); ++i)
            backend = std::max(backend,
                               std::abs(direct.data()[i] - fft.data()[i]) / scale);

        const int si = 1 + c % (g.m - 1), sj = 1 + c % (g.n - 1);
        Field shifted(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.m; ++i) shifted(i, j) = phi.at_periodic(i - si, j - sj);
        for (auto [backend_kind, slot] :
             {std::pair{ConvBackend::direct, &translation_direct},
              std::pair{ConvBackend::fft, &translation_fft}}) {
            const Field conv_shift =
                conv_apply(kernel, KernelPart::combined, shifted, backend_kind);
            const Field conv_plain = conv_apply(kernel, KernelPart::combined, phi, backend_kind);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.m; ++i)
                    *slot = std::max(*slot, std::abs(conv_shift(i, j) -
                                                     conv_plain.at_periodic(i - si, j - sj)) /
                                                scale);
        }
    }
    s.record("exchange_identity", cases, exchange, 1e-11);
    s.record("young_bound", cases, young, 1e-12);
    s.record("backend_equivalence", cases, backend, 1e-12);
    s.record("translation_equivariance_direct", cases, translation_direct, 0.0);
    s.record("translation_equivariance_fft", cases, translation_fft, 1e-12);
}

void energy_identities(Suite& s, int cases) {
    double splitting = 0.0, remainder = 0.0, eta_sym = 0.0, convexity = 0.0;
    for (int c = 0; c < cases; ++c) {
        const GridSpec g = pick_grid(s.rng, c);
        const KernelGrid kernel =
            KernelGrid::from_samples(g, s.rng.even_kernel(g), s.rng.even_kernel(g));
        double gamma_c = s.rng.uniform(0.0, 2.0);
        double gamma_e = s.rng.uniform(0.0, 1.0);
        if (kernel.jc_one() + gamma_c <= kernel.je_one() + gamma_e)
            gamma_c = kernel.je_one() + gamma_e - kernel.jc_one() + 0.1;
        const ModelParams params =
            ModelParams::create(Equation::nch, 1.0, gamma_c, gamma_e, kernel);

        const Field phi = s.rng.field(g);
        const Field psi = s.rng.field(g);
        const double f = energy(phi, kernel, params, ConvBackend::direct);
        const double fc = energy_convex(phi, kernel, params);
        const double fe = energy_concave(phi, kernel, params, ConvBackend::direct);
        splitting = std::max(splitting,
                             std::abs(fc - fe - f) / (std::abs(fc) + std::abs(fe) + 1e-300));

        const double pe = pseudo_energy(phi, psi, kernel, params, ConvBackend::direct);
        const double fpsi = energy(psi, kernel, params, ConvBackend::direct);
        remainder = std::max(remainder,
                             (fpsi - pe) / (std::abs(fpsi) + std::abs(pe) + 1e-300));

        const Field e_ab = eta(phi, psi);
        const Field e_ba = eta(psi, phi);
        for (std::size_t i = 0; i < e_ab.size(); ++i)
            eta_sym = std::max(eta_sym, std::abs(e_ab.data()[i] - e_ba.data()[i]));

        for (double t : {0.25, 0.5, 0.75}) {
            Field mix(g);
            for (std::size_t i = 0; i < mix.size(); ++i)
                mix.data()[i] = t * phi.data()[i] + (1.0 - t) * psi.data()[i];
            const double lhs = energy_convex(mix, kernel, params);
            const double rhs = t * energy_convex(phi, kernel, params) +
                               (1.0 - t) * energy_convex(psi, kernel, params);
            convexity = std::max(convexity, (lhs - rhs) / (std::abs(rhs) + 1.0));
        }
    }
    s.record("splitting_identity", cases, splitting, 1e-12);
    s.record("pseudo_energy_remainder_nonneg", cases, remainder, 1e-12);
    s.record("eta_symmetry", cases, eta_sym, 0.0);
    s.record("convexity_probe", cases, convexity, 1e-12);
}

}  // namespace

std::vector<PropertyReport> run_property_suite(std::uint64_t seed, int cases) {
    Suite suite(seed);
    grid_identities(suite, cases);
    convolution_identities(suite, cases);
    energy_identities(suite, cases);
    return suite.reports;
}

}  // namespace nlpf
