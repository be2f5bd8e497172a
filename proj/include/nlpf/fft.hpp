#pragma once

#include <complex>
#include <memory>
#include <span>

namespace nlpf {

/// Real 2D DFT executor for an m x n grid (x index fastest), FFTW-backed.
/// Plans are created with deterministic flags and shared through a
/// process-wide cache; forward/inverse may be called concurrently on
/// distinct buffers.
///
/// Spectrum layout: n rows of (m/2 + 1) complex values, x frequency fastest.
class Dft2 {
public:
    static std::shared_ptr<const Dft2> get(int m, int n);

    ~Dft2();
    Dft2(const Dft2&) = delete;
    Dft2& operator=(const Dft2&) = delete;

    int m() const { return m_; }
    int n() const { return n_; }
    int spec_m() const { return m_ / 2 + 1; }
    std::size_t spectrum_size() const { return std::size_t(spec_m()) * n_; }

    void forward(std::span<const double> real, std::span<std::complex<double>> spec) const;

    /// True inverse (1/(m n) normalization applied). Clobbers `spec`.
    void inverse(std::span<std::complex<double>> spec, std::span<double> real) const;

private:
    Dft2(int m, int n);
    int m_, n_;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

}  // namespace nlpf
