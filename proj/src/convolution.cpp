#include "nlpf/convolution.hpp"

#include <cmath>
#include <mutex>

#include "nlpf/fft.hpp"

namespace nlpf {

struct KernelGrid::Cache {
    std::mutex mu;
    std::vector<std::complex<double>> spec[3];
    bool ready[3] = {false, false, false};
};

ConvBackend resolve_backend(ConvBackend backend, const GridSpec& grid) {
    if (backend != ConvBackend::automatic) return backend;
    return std::min(grid.m, grid.n) <= 32 ? ConvBackend::direct : ConvBackend::fft;
}

namespace {

// Wraps a displacement into the fundamental cell (-L/2, L/2].
double wrap_displacement(double d, double L) {
    double w = d - L * std::floor(d / L);  // [0, L)
    if (w > 0.5 * L) w -= L;
    return w;
}

std::vector<double> sample_gaussian(double amp, double sigma, const GridSpec& g, int images) {
    std::vector<double> out(g.count(), 0.0);
    const double inv_s2 = 1.0 / (sigma * sigma);
    for (int l = 0; l < g.n; ++l) {
        const double y = wrap_displacement(double(l) * g.h, g.L2);
        for (int k = 0; k < g.m; ++k) {
            const double x = wrap_displacement(double(k) * g.h, g.L1);
            double v = 0.0;
            for (int q = -images; q <= images; ++q)
                for (int p = -images; p <= images; ++p) {
                    const double xx = x + double(p) * g.L1;
                    const double yy = y + double(q) * g.L2;
                    v += amp * std::exp(-(xx * xx + yy * yy) * inv_s2);
                }
            out[std::size_t(l) * g.m + k] = v;
        }
    }
    return out;
}

double mass(std::span<const double> samples, const GridSpec& g) {
    double acc = 0.0;
    for (double x : samples) acc += x;
    return g.h * g.h * acc;
}

}  // namespace

KernelGrid::KernelGrid(const GridSpec& grid, std::vector<double> jc, std::vector<double> je)
    : grid_(grid), jc_(std::move(jc)), je_(std::move(je)), cache_(std::make_shared<Cache>()) {
    jc_one_ = mass(jc_, grid_);
    je_one_ = mass(je_, grid_);
    validate();
}

void KernelGrid::validate() const {
    if (jc_.size() != grid_.count() || je_.size() != grid_.count())
        throw Error("KernelGrid: sample array size does not match grid");
    const int m = grid_.m, n = grid_.n;
    for (const auto* part : {&jc_, &je_}) {
        const std::vector<double>& f = *part;
        for (double v : f)
            if (!(v >= 0.0)) throw Error("KernelGrid: kernel samples must be non-negative");
        double worst = 0.0;
        for (int l = 0; l < n; ++l) {
            const int lr = (n - l) % n;
            for (int k = 0; k < m; ++k) {
                const int kr = (m - k) % m;
                worst = std::max(worst, std::abs(f[std::size_t(l) * m + k] -
                                                 f[std::size_t(lr) * m + kr]));
            }
        }
        if (worst > 1e-12)
            throw Error("KernelGrid: even-symmetry violation " + std::to_string(worst));
    }
}

KernelGrid KernelGrid::gaussian(double alpha, double sigma, const GridSpec& grid, int images) {
    if (!(alpha > 0.0) || !(sigma > 0.0))
        throw Error("KernelGrid::gaussian: alpha and sigma must be positive");
    return KernelGrid(grid, sample_gaussian(alpha, sigma, grid, images),
                      std::vector<double>(grid.count(), 0.0));
}

KernelGrid KernelGrid::difference_of_gaussians(double alpha, double sigma1, double beta,
                                               double sigma2, const GridSpec& grid,
                                               int images) {
    if (!(alpha > 0.0) || !(sigma1 > 0.0) || !(beta >= 0.0) || !(sigma2 > 0.0))
        throw Error("KernelGrid::difference_of_gaussians: parameters must be positive");
    return KernelGrid(grid, sample_gaussian(alpha, sigma1, grid, images),
                      beta == 0.0 ? std::vector<double>(grid.count(), 0.0)
                                  : sample_gaussian(beta, sigma2, grid, images));
}

KernelGrid KernelGrid::from_samples(const GridSpec& grid, std::vector<double> jc,
                                    std::vector<double> je) {
    return KernelGrid(grid, std::move(jc), std::move(je));
}

double KernelGrid::one(KernelPart part) const {
    switch (part) {
        case KernelPart::convex: return jc_one_;
        case KernelPart::concave: return je_one_;
        case KernelPart::combined: default: return jc_one_ - je_one_;
    }
}

std::span<const std::complex<double>> KernelGrid::spectrum(KernelPart part) const {
    const int idx = int(part);
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->ready[idx]) {
        auto dft = Dft2::get(grid_.m, grid_.n);
        std::vector<double> samples;
        switch (part) {
            case KernelPart::convex: samples.assign(jc_.begin(), jc_.end()); break;
            case KernelPart::concave: samples.assign(je_.begin(), je_.end()); break;
            case KernelPart::combined:
            default:
                samples.resize(jc_.size());
                for (std::size_t k = 0; k < jc_.size(); ++k) samples[k] = jc_[k] - je_[k];
                break;
        }
        cache_->spec[idx].resize(dft->spectrum_size());
        dft->forward(samples, cache_->spec[idx]);
        cache_->ready[idx] = true;
    }
    return cache_->spec[idx];
}

double conv_one(const KernelGrid& kernel, KernelPart part) { return kernel.one(part); }

namespace {

void conv_direct(const KernelGrid& kernel, KernelPart part, const Field& phi, Field& out) {
    const GridSpec& g = phi.grid();
    const int m = g.m, n = g.n;
    std::vector<double> f(g.count());
    const auto jc = kernel.jc(), je = kernel.je();
    for (std::size_t k = 0; k < f.size(); ++k) {
        switch (part) {
            case KernelPart::convex: f[k] = jc[k]; break;
            case KernelPart::concave: f[k] = je[k]; break;
            case KernelPart::combined: default: f[k] = jc[k] - je[k]; break;
        }
    }
    const double h2 = g.h * g.h;
    const double* pv = phi.data();
    double* ov = out.data();
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < m; ++a) {
            double acc = 0.0;
            for (int d = 0; d < n; ++d) {
                int jb = b - d;
                if (jb < 0) jb += n;
                const double* prow = pv + std::size_t(jb) * m;
                const double* frow = f.data() + std::size_t(d) * m;
                for (int c = 0; c < m; ++c) {
                    int ia = a - c;
                    if (ia < 0) ia += m;
                    acc += frow[c] * prow[ia];
                }
            }
            ov[std::size_t(b) * m + a] = h2 * acc;
        }
    }
}

void conv_fft(const KernelGrid& kernel, KernelPart part, const Field& phi, Field& out) {
    const GridSpec& g = phi.grid();
    auto dft = Dft2::get(g.m, g.n);
    auto kspec = kernel.spectrum(part);
    std::vector<std::complex<double>> spec(dft->spectrum_size());
    dft->forward(phi.values(), spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= kspec[k];
    dft->inverse(spec, out.values());
    const double h2 = g.h * g.h;
    for (double& x : out.values()) x *= h2;
}

}  // namespace

void conv_apply(const KernelGrid& kernel, KernelPart part, const Field& phi, Field& out,
                ConvBackend backend) {
    require_same_grid(kernel.grid(), phi.grid(), "conv_apply");
    require_same_grid(phi.grid(), out.grid(), "conv_apply");
    if (resolve_backend(backend, phi.grid()) == ConvBackend::direct)
        conv_direct(kernel, part, phi, out);
    else
        conv_fft(kernel, part, phi, out);
}

Field conv_apply(const KernelGrid& kernel, KernelPart part, const Field& phi,
                 ConvBackend backend) {
    Field out(phi.grid());
    conv_apply(kernel, part, phi, out, backend);
    return out;
}

}  // namespace nlpf
