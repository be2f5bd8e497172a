#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nlpf/grid.hpp"

namespace nlpf {

/// Which part of the split kernel a convolution uses:
/// combined = Jc - Je, convex = Jc, concave = Je.
enum class KernelPart { combined, convex, concave };

enum class ConvBackend { automatic, direct, fft };

/// Resolves `automatic` to `direct` for min(m, n) <= 32 and `fft` otherwise.
ConvBackend resolve_backend(ConvBackend backend, const GridSpec& grid);

/// Vertex-centered samples of the kernel pair (Jc, Je) on an m x n grid,
/// plus their masses [Jc*1] = h^2 sum Jc and [Je*1].
///
/// Samples are indexed by displacement: entry (k, l), k = 0..m-1, holds the
/// kernel value at the vertex displaced (k h, l h) from the origin, with the
/// displacement wrapped into the fundamental cell (-L/2, L/2]^2. Entry (0, 0)
/// is the kernel value at the origin. Even symmetry then reads
/// f[k][l] = f[(m-k) mod m][(n-l) mod n] and is validated at construction,
/// as is entrywise non-negativity of both parts.
class KernelGrid {
public:
    /// Single periodized Gaussian alpha*exp(-(x^2+y^2)/sigma^2); Je = 0.
    /// `images` > 0 adds the (2*images+1)^2 periodic image sum for kernels
    /// wide enough that single-cell sampling truncates the tails.
    static KernelGrid gaussian(double alpha, double sigma, const GridSpec& grid,
                               int images = 0);

    /// Difference of two Gaussians: Jc = (alpha, sigma1), Je = (beta, sigma2),
    /// stored separately to preserve the convex splitting.
    static KernelGrid difference_of_gaussians(double alpha, double sigma1, double beta,
                                              double sigma2, const GridSpec& grid,
                                              int images = 0);

    /// Custom samples; validates non-negativity and even symmetry (1e-12 abs).
    static KernelGrid from_samples(const GridSpec& grid, std::vector<double> jc,
                                   std::vector<double> je);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> jc() const { return jc_; }
    std::span<const double> je() const { return je_; }
    double jc_one() const { return jc_one_; }
    double je_one() const { return je_one_; }
    double one(KernelPart part) const;

    /// DFT of the requested sample sequence, computed once and cached.
    std::span<const std::complex<double>> spectrum(KernelPart part) const;

private:
    KernelGrid(const GridSpec& grid, std::vector<double> jc, std::vector<double> je);
    void validate() const;

    GridSpec grid_;
    std::vector<double> jc_, je_;
    double jc_one_ = 0.0, je_one_ = 0.0;

    struct Cache;
    std::shared_ptr<Cache> cache_;
};

/// Discrete periodic convolution [f * phi]_{i,j} = h^2 sum_{k,l} f_{k,l} phi_{i-k,j-l}.
/// The FFT and direct backends agree to ~1e-12 (scaled by |f|_1 |phi|_inf).
Field conv_apply(const KernelGrid& kernel, KernelPart part, const Field& phi,
                 ConvBackend backend = ConvBackend::automatic);
void conv_apply(const KernelGrid& kernel, KernelPart part, const Field& phi, Field& out,
                ConvBackend backend);

/// [f * 1] = h^2 sum of samples; equals conv_apply(f, 1) at every point.
double conv_one(const KernelGrid& kernel, KernelPart part);

}  // namespace nlpf
