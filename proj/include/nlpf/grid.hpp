#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields (or a field and a kernel) live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Nonlinear or linear solve failed to reach tolerance.
class SolverError : public Error {
public:
    SolverError(std::string msg, int step, double residual)
        : Error(std::move(msg)), step(step), residual(residual) {}
    int step = -1;
    double residual = 0.0;
};

/// Uniform periodic cell-centered grid over (x0, x0+L1) x (y0, y0+L2)
/// with m x n square cells of size h = L1/m = L2/n.
/// Cell centers: (x0 + (i+1/2) h, y0 + (j+1/2) h) for 0-based (i, j).
struct GridSpec {
    double x0 = 0.0, y0 = 0.0;
    double L1 = 1.0, L2 = 1.0;
    int m = 1, n = 1;
    double h = 1.0;

    static GridSpec make(double L1, double L2, int m, int n,
                         double x0 = 0.0, double y0 = 0.0);

    double cell_x(int i) const { return x0 + (double(i) + 0.5) * h; }
    double cell_y(int j) const { return y0 + (double(j) + 0.5) * h; }
    double area() const { return L1 * L2; }
    std::size_t count() const { return std::size_t(m) * std::size_t(n); }

    bool operator==(const GridSpec&) const = default;
};

/// Wraps any integer index into [0, period).
inline int wrap_index(long i, int period) {
    long r = i % period;
    return int(r < 0 ? r + period : r);
}

enum class FieldRole : std::uint8_t { generic, state, potential, residual };

/// Cell-centered grid function with periodic index semantics.
/// Storage is row-major with the x index fastest: value(i, j) = v[j*m + i].
class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& grid, double fill = 0.0,
                   FieldRole role = FieldRole::generic)
        : role(role), grid_(grid), v_(grid.count(), fill) {}

    const GridSpec& grid() const { return grid_; }
    int m() const { return grid_.m; }
    int n() const { return grid_.n; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int i, int j) { return v_[std::size_t(j) * grid_.m + i]; }
    double operator()(int i, int j) const { return v_[std::size_t(j) * grid_.m + i]; }

    /// Periodic access: any integer pair maps onto the fundamental grid.
    double at_periodic(long i, long j) const {
        return v_[std::size_t(wrap_index(j, grid_.n)) * grid_.m + wrap_index(i, grid_.m)];
    }

    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    bool all_finite() const;

    FieldRole role = FieldRole::generic;

private:
    GridSpec grid_;
    std::vector<double> v_;
};

/// East-west edge-centered function: u(i+1/2, j), i = 0..m-1 wrapping.
struct EdgeFieldEW {
    GridSpec grid;
    std::vector<double> v;
    explicit EdgeFieldEW(const GridSpec& g) : grid(g), v(g.count(), 0.0) {}
    double& operator()(int i, int j) { return v[std::size_t(j) * grid.m + i]; }
    double operator()(int i, int j) const { return v[std::size_t(j) * grid.m + i]; }
};

/// North-south edge-centered function: u(i, j+1/2), j = 0..n-1 wrapping.
struct EdgeFieldNS {
    GridSpec grid;
    std::vector<double> v;
    explicit EdgeFieldNS(const GridSpec& g) : grid(g), v(g.count(), 0.0) {}
    double& operator()(int i, int j) { return v[std::size_t(j) * grid.m + i]; }
    double operator()(int i, int j) const { return v[std::size_t(j) * grid.m + i]; }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

/// Raw sum of products, no h^2 weight. Callers apply h^2 where needed.
double inner_product(const Field& a, const Field& b);
double inner_product(const EdgeFieldEW& a, const EdgeFieldEW& b);
double inner_product(const EdgeFieldNS& a, const EdgeFieldNS& b);

/// h^2-weighted p-norm (h^2 sum |a|^p)^(1/p). Requires p >= 1.
double norm_p(const Field& a, double p);
double norm_inf(const Field& a);

/// Five-point periodic Laplacian.
Field laplacian(const Field& a);
void laplacian(const Field& a, Field& out);

/// Center-to-edge forward differences: (D_x a)(i+1/2, j) = (a(i+1) - a(i)) / h.
EdgeFieldEW diff_x(const Field& a);
EdgeFieldNS diff_y(const Field& a);

/// Adjoint edge-to-center differences: (d_x f)(i, j) = (f(i+1/2) - f(i-1/2)) / h.
Field diff_x_adjoint(const EdgeFieldEW& f);
Field diff_y_adjoint(const EdgeFieldNS& f);

/// || grad_h a ||_2^2 = h^2 (sum (D_x a)^2 + sum (D_y a)^2).
double grad_norm_sq(const Field& a);

}  // namespace nlpf
