#include "nlpf/grid.hpp"

#include <cmath>
#include <cstdio>

namespace nlpf {

GridSpec GridSpec::make(double L1, double L2, int m, int n, double x0, double y0) {
    if (m < 1 || n < 1) throw Error("GridSpec: cell counts must be positive");
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw Error("GridSpec: domain lengths must be positive");
    const double hx = L1 / m;
    const double hy = L2 / n;
    if (std::abs(hx - hy) > 1e-14 * hx) {
        throw Error("GridSpec: cells must be square, L1/m = " + std::to_string(hx) +
                    " vs L2/n = " + std::to_string(hy));
    }
    GridSpec g;
    g.x0 = x0;
    g.y0 = y0;
    g.L1 = L1;
    g.L2 = L2;
    g.m = m;
    g.n = n;
    g.h = hx;
    return g;
}

bool Field::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

double inner_product(const Field& a, const Field& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    const double* av = a.data();
    const double* bv = b.data();
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += av[k] * bv[k];
    return acc;
}

double inner_product(const EdgeFieldEW& a, const EdgeFieldEW& b) {
    require_same_grid(a.grid, b.grid, "inner_product(ew)");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.v.size(); ++k) acc += a.v[k] * b.v[k];
    return acc;
}

double inner_product(const EdgeFieldNS& a, const EdgeFieldNS& b) {
    require_same_grid(a.grid, b.grid, "inner_product(ns)");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.v.size(); ++k) acc += a.v[k] * b.v[k];
    return acc;
}

double norm_p(const Field& a, double p) {
    if (!(p >= 1.0)) throw Error("norm_p: p must be >= 1");
    const GridSpec& g = a.grid();
    const double h2 = g.h * g.h;
    double acc = 0.0;
    if (p == 1.0) {
        for (double x : a.values()) acc += std::abs(x);
        return h2 * acc;
    }
    if (p == 2.0) {
        for (double x : a.values()) acc += x * x;
        return std::sqrt(h2 * acc);
    }
    if (p == 4.0) {
        for (double x : a.values()) {
            const double x2 = x * x;
            acc += x2 * x2;
        }
        return std::sqrt(std::sqrt(h2 * acc));
    }
    for (double x : a.values()) acc += std::pow(std::abs(x), p);
    return std::pow(h2 * acc, 1.0 / p);
}

double norm_inf(const Field& a) {
    double best = 0.0;
    for (double x : a.values()) best = std::max(best, std::abs(x));
    return best;
}

void laplacian(const Field& a, Field& out) {
    const GridSpec& g = a.grid();
    require_same_grid(g, out.grid(), "laplacian");
    const int m = g.m, n = g.n;
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double* av = a.data();
    double* ov = out.data();
    for (int j = 0; j < n; ++j) {
        const int jn = (j + 1 == n) ? 0 : j + 1;
        const int jp = (j == 0) ? n - 1 : j - 1;
        const double* row = av + std::size_t(j) * m;
        const double* north = av + std::size_t(jn) * m;
        const double* south = av + std::size_t(jp) * m;
        double* orow = ov + std::size_t(j) * m;
        for (int i = 0; i < m; ++i) {
            const int ie = (i + 1 == m) ? 0 : i + 1;
            const int iw = (i == 0) ? m - 1 : i - 1;
            orow[i] = (row[ie] + row[iw] + north[i] + south[i] - 4.0 * row[i]) * inv_h2;
        }
    }
}

Field laplacian(const Field& a) {
    Field out(a.grid());
    laplacian(a, out);
    return out;
}

EdgeFieldEW diff_x(const Field& a) {
    const GridSpec& g = a.grid();
    EdgeFieldEW f(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const int ie = (i + 1 == g.m) ? 0 : i + 1;
            f(i, j) = (a(ie, j) - a(i, j)) * inv_h;
        }
    return f;
}

EdgeFieldNS diff_y(const Field& a) {
    const GridSpec& g = a.grid();
    EdgeFieldNS f(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.n; ++j) {
        const int jn = (j + 1 == g.n) ? 0 : j + 1;
        for (int i = 0; i < g.m; ++i) f(i, j) = (a(i, jn) - a(i, j)) * inv_h;
    }
    return f;
}

Field diff_x_adjoint(const EdgeFieldEW& f) {
    const GridSpec& g = f.grid;
    Field out(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.m; ++i) {
            const int iw = (i == 0) ? g.m - 1 : i - 1;
            out(i, j) = (f(i, j) - f(iw, j)) * inv_h;
        }
    return out;
}

Field diff_y_adjoint(const EdgeFieldNS& f) {
    const GridSpec& g = f.grid;
    Field out(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.n; ++j) {
        const int js = (j == 0) ? g.n - 1 : j - 1;
        for (int i = 0; i < g.m; ++i) out(i, j) = (f(i, j) - f(i, js)) * inv_h;
    }
    return out;
}

double grad_norm_sq(const Field& a) {
    const GridSpec& g = a.grid();
    const int m = g.m, n = g.n;
    const double inv_h = 1.0 / g.h;
    const double* av = a.data();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jn = (j + 1 == n) ? 0 : j + 1;
        const double* row = av + std::size_t(j) * m;
        const double* north = av + std::size_t(jn) * m;
        for (int i = 0; i < m; ++i) {
            const int ie = (i + 1 == m) ? 0 : i + 1;
            const double dx = (row[ie] - row[i]) * inv_h;
            const double dy = (north[i] - row[i]) * inv_h;
            acc += dx * dx + dy * dy;
        }
    }
    return g.h * g.h * acc;
}

}  // namespace nlpf
