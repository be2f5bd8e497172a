#include "nlpf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace nlpf {

namespace {
// FFTW's planner is not thread-safe; executions on distinct arrays are.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace

Dft2::Dft2(int m, int n) : m_(m), n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    // Dimension order for FFTW is slowest-first: n rows of m reals.
    fftw_complex* spec = fftw_alloc_complex(spectrum_size());
    double* real = fftw_alloc_real(std::size_t(m) * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_fwd_ = fftw_plan_dft_r2c_2d(n, m, real, spec, flags);
    plan_inv_ = fftw_plan_dft_c2r_2d(n, m, spec, real, flags);
    fftw_free(real);
    fftw_free(spec);
    if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("Dft2: FFTW planning failed");
}

Dft2::~Dft2() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

std::shared_ptr<const Dft2> Dft2::get(int m, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const Dft2>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{m, n}];
    if (!slot) slot = std::shared_ptr<const Dft2>(new Dft2(m, n));
    return slot;
}

void Dft2::forward(std::span<const double> real, std::span<std::complex<double>> spec) const {
    if (real.size() != std::size_t(m_) * n_ || spec.size() != spectrum_size())
        throw std::invalid_argument("Dft2::forward: buffer size mismatch");
    // r2c transforms preserve their input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_),
                         const_cast<double*>(real.data()),
                         reinterpret_cast<fftw_complex*>(spec.data()));
}

void Dft2::inverse(std::span<std::complex<double>> spec, std::span<double> real) const {
    if (real.size() != std::size_t(m_) * n_ || spec.size() != spectrum_size())
        throw std::invalid_argument("Dft2::inverse: buffer size mismatch");
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(spec.data()), real.data());
    const double scale = 1.0 / (double(m_) * double(n_));
    for (double& x : real) x *= scale;
}

}  // namespace nlpf
