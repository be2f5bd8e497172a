#pragma once

#include <cstdint>
#include <string>

#include "nlpf/convolution.hpp"
#include "nlpf/energy.hpp"

namespace nlpf {

struct DomainSpec {
    double x0 = -0.5, y0 = -0.5;
    double L1 = 1.0, L2 = 1.0;
};

struct KernelSpec {
    enum class Type { gaussian, dog };
    Type type = Type::gaussian;
    double alpha = 400.0;
    double sigma = 0.05;   // sigma1 for dog
    double beta = 0.0;
    double sigma2 = 0.0;
    int images = 0;
};

struct InitSpec {
    enum class Type { sinusoid, random, file };
    Type type = Type::sinusoid;
    double mean = 0.0;
    double amplitude = 0.05;
    std::uint64_t seed = 42;
    std::string path;  // snapshot file for Type::file
};

GridSpec make_grid(const DomainSpec& d, int m, int n);
KernelGrid make_kernel(const KernelSpec& k, const GridSpec& grid);
Field make_initial(const InitSpec& init, const GridSpec& grid);

}  // namespace nlpf
