#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlpf/grid.hpp"

namespace nlpf {

struct PropertyReport {
    std::string name;
    int cases = 0;
    double worst = 0.0;  // worst relative residual or bound violation seen
    double tol = 0.0;
    bool pass = false;
};

/// Randomized property suite: summation by parts, discrete Green identities,
/// the inverse inequality, the convolution exchange identity and Young bound,
/// direct-vs-FFT backend agreement, translation equivariance, the convex
/// splitting identity, pseudo-energy remainder sign, and eta symmetry.
std::vector<PropertyReport> run_property_suite(std::uint64_t seed = 0x5eedULL,
                                               int cases = 100);

}  // namespace nlpf
