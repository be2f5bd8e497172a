#include <doctest.h>

#include <cmath>

#include "nlpf/convolution.hpp"
#include "support/oracles.hpp"

using namespace nlpf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gaussian kernel construction") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 256, 256, -0.5, -0.5);
    const double sigma = 0.05, alpha = 1.0 / (sigma * sigma);
    const KernelGrid k = KernelGrid::gaussian(alpha, sigma, g);

    CHECK(k.jc()[0] == alpha);  // origin vertex
    CHECK(k.jc_one() == doctest::Approx(kPi).epsilon(1e-6));
    CHECK(k.je_one() == 0.0);
    for (double x : k.je()) CHECK(x == 0.0);

    CHECK_THROWS_AS(KernelGrid::gaussian(-1.0, sigma, g), Error);
    CHECK_THROWS_AS(KernelGrid::gaussian(alpha, 0.0, g), Error);
}

TEST_CASE("difference of gaussians") {
    const GridSpec g = GridSpec::make(20.0, 20.0, 512, 512, -10.0, -10.0);
    const double s1 = 0.16, s2 = 0.4;
    const double alpha = 0.1 / (s1 * s1), beta = 0.08 / (s2 * s2);
    const KernelGrid k = KernelGrid::difference_of_gaussians(alpha, s1, beta, s2, g);

    CHECK(k.jc_one() == doctest::Approx(0.1 * kPi).epsilon(1e-6));
    CHECK(k.je_one() == doctest::Approx(0.08 * kPi).epsilon(1e-6));
    CHECK(k.jc_one() - k.je_one() > 0.0);

    // beta = 0 degenerates to the single Gaussian
    const KernelGrid dog0 = KernelGrid::difference_of_gaussians(alpha, s1, 0.0, s2, g);
    const KernelGrid single = KernelGrid::gaussian(alpha, s1, g);
    for (std::size_t i = 0; i < dog0.jc().size(); ++i) {
        CHECK(dog0.jc()[i] == single.jc()[i]);
        CHECK(dog0.je()[i] == 0.0);
    }
}

TEST_CASE("kernel sample validation") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 8, 8);
    std::vector<double> asym(g.count(), 0.0);
    asym[1] = 1.0;  // spike at (1,0) has no mirror at (7,0)
    CHECK_THROWS_AS(KernelGrid::from_samples(g, asym, std::vector<double>(g.count(), 0.0)),
                    Error);

    std::vector<double> negative(g.count(), -0.5);
    CHECK_THROWS_AS(KernelGrid::from_samples(g, negative, std::vector<double>(g.count(), 0.0)),
                    Error);
}

TEST_CASE("convolution of constants and spikes") {
    const GridSpec g = GridSpec::make(1.0, 1.0, 8, 8);
    oracles::Rng rng(7);
    const KernelGrid k = KernelGrid::from_samples(g, rng.even_kernel_samples(g),
                                                  std::vector<double>(g.count(), 0.0));

    const Field c_field(g, 0.75);
    const Field conv_c = conv_apply(k, KernelPart::combined, c_field, ConvBackend::direct);
    for (double x : conv_c.values())
        CHECK(x == doctest::Approx(0.75 * k.jc_one()).epsilon(1e-13));

    // self-symmetric unit spike at (m/2, n/2): pure shift by half the period
    std::vector<double> spike(g.count(), 0.0);
    spike[std::size_t(g.n / 2) * g.m + g.m / 2] = 1.0;
    const KernelGrid ks =
        KernelGrid::from_samples(g, spike, std::vector<double>(g.count(), 0.0));
    CHECK(ks.jc_one() == doctest::Approx(g.h * g.h).epsilon(1e-15));

    const Field phi = rng.field(g);
    const double h2 = g.h * g.h;
    for (ConvBackend backend : {ConvBackend::direct, ConvBackend::fft}) {
        const Field shifted = conv_apply(ks, KernelPart::combined, phi, backend);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.m; ++i)
                CHECK(shifted(i, j) ==
                      doctest::Approx(h2 * phi.at_periodic(i - g.m / 2, j - g.n / 2))
                          .epsilon(1e-12));
    }

    // zero kernel
    const KernelGrid kz = KernelGrid::from_samples(g, std::vector<double>(g.count(), 0.0),
                                                   std::vector<double>(g.count(), 0.0));
    CHECK(conv_one(kz, KernelPart::combined) == 0.0);
    const Field conv_zero = conv_apply(kz, KernelPart::combined, phi, ConvBackend::direct);
    for (double x : conv_zero.values()) CHECK(x == 0.0);
}

TEST_CASE("conv_one equals convolution with ones") {
    const GridSpec g = GridSpec::make(1.5, 1.0, 12, 8, -0.75, -0.5);
    oracles::Rng rng(8);
    const KernelGrid k =
        KernelGrid::from_samples(g, rng.even_kernel_samples(g), rng.even_kernel_samples(g));
    const Field ones(g, 1.0);
    for (KernelPart part : {KernelPart::combined, KernelPart::convex, KernelPart::concave}) {
        const Field conv = conv_apply(k, part, ones, ConvBackend::direct);
        for (double x : conv.values())
            CHECK(x == doctest::Approx(conv_one(k, part)).epsilon(1e-13));
    }
}

TEST_CASE("fft backend matches the definition") {
    oracles::Rng rng(9);
    // random 16x16 against the literal quadruple loop
    const GridSpec g16 = GridSpec::make(1.0, 1.0, 16, 16);
    for (int rep = 0; rep < 5; ++rep) {
        const KernelGrid k = KernelGrid::from_samples(g16, rng.even_kernel_samples(g16),
                                                      rng.even_kernel_samples(g16));
        const Field phi = rng.field(g16);
        const Field naive = oracles::naive_conv(k, KernelPart::combined, phi);
        for (ConvBackend backend : {ConvBackend::direct, ConvBackend::fft}) {
            const Field got = conv_apply(k, KernelPart::combined, phi, backend);
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(got.data()[i] == doctest::Approx(naive.data()[i]).epsilon(1e-11));
        }
    }

    // backend equivalence on larger grids, scaled absolute difference
    for (int m : {48, 64}) {
        const GridSpec g = GridSpec::make(1.0, 1.0, m, m);
        const KernelGrid k = KernelGrid::from_samples(g, rng.even_kernel_samples(g),
                                                      rng.even_kernel_samples(g));
        const Field phi = rng.field(g);
        const Field direct = conv_apply(k, KernelPart::combined, phi, ConvBackend::direct);
        const Field fft = conv_apply(k, KernelPart::combined, phi, ConvBackend::fft);
        const double scale = std::max(1.0, (k.jc_one() + k.je_one()) * norm_inf(phi));
        for (std::size_t i = 0; i < direct.size(); ++i)
            CHECK(std::abs(direct.data()[i] - fft.data()[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("backend resolution") {
    CHECK(resolve_backend(ConvBackend::automatic, GridSpec::make(1.0, 1.0, 32, 32)) ==
          ConvBackend::direct);
    CHECK(resolve_backend(ConvBackend::automatic, GridSpec::make(1.0, 1.0, 64, 64)) ==
          ConvBackend::fft);
    CHECK(resolve_backend(ConvBackend::direct, GridSpec::make(1.0, 1.0, 64, 64)) ==
          ConvBackend::direct);
}
