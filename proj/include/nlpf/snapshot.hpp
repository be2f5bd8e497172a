#pragma once

#include <string>

#include "nlpf/grid.hpp"

namespace nlpf {

/// Malformed or truncated snapshot file.
class FormatError : public Error {
public:
    using Error::Error;
};

struct Snapshot {
    Field field;
    double t = 0.0;
};

/// Fixed little-endian layout, bit-exact across platforms:
///   magic "NLPF1", u32 m, u32 n, f64 x0, y0, L1, L2, f64 t,
///   then m*n f64 values with the x index fastest.
void write_snapshot(const std::string& path, const Field& field, double t);
Snapshot read_snapshot(const std::string& path);

}  // namespace nlpf
