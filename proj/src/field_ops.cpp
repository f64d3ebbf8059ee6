#include "ddch/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddch {

void GridSpec::validate() const {
    if (nx < 8 || ny < 8)
        throw std::invalid_argument("GridSpec: nx and ny must be >= 8");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("GridSpec: lx and ly must be positive");
}

namespace {

inline void check_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("fields are defined on different grids");
}

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_dn(int i, int n) { return i == 0 ? n - 1 : i - 1; }

} // namespace

ScalarField make_field(const GridSpec& g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = f(g.cell_x(i), g.cell_y(j));
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const double c = f(i, j);
            out(i, j) = ax * (f(ip, j) - 2.0 * c + f(im, j)) +
                        ay * (f(i, jp) - 2.0 * c + f(i, jm));
        }
    }
    return out;
}

ScalarField div_coeff_grad(const ScalarField& coeff, const ScalarField& f) {
    check_same_grid(coeff, f);
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const double c = coeff(i, j);
            const double ce = 0.5 * (c + coeff(ip, j));
            const double cw = 0.5 * (c + coeff(im, j));
            const double cn = 0.5 * (c + coeff(i, jp));
            const double cs = 0.5 * (c + coeff(i, jm));
            out(i, j) = ax * (ce * (f(ip, j) - f(i, j)) - cw * (f(i, j) - f(im, j))) +
                        ay * (cn * (f(i, jp) - f(i, j)) - cs * (f(i, j) - f(i, jm)));
        }
    }
    return out;
}

ScalarField grad_dot_grad(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a, b);
    const GridSpec& g = a.grid;
    ScalarField out(g);
    const double cx = 1.0 / (2.0 * g.hx());
    const double cy = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const double agx = cx * (a(ip, j) - a(im, j));
            const double agy = cy * (a(i, jp) - a(i, jm));
            const double bgx = cx * (b(ip, j) - b(im, j));
            const double bgy = cy * (b(i, jp) - b(i, jm));
            out(i, j) = agx * bgx + agy * bgy;
        }
    }
    return out;
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values)
        s += v;
    return f.grid.hx() * f.grid.hy() * s;
}

void gradient_centered(const ScalarField& f, ScalarField& gx, ScalarField& gy) {
    const GridSpec& g = f.grid;
    gx = ScalarField(g);
    gy = ScalarField(g);
    const double cx = 1.0 / (2.0 * g.hx());
    const double cy = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            gx(i, j) = cx * (f(ip, j) - f(im, j));
            gy(i, j) = cy * (f(i, jp) - f(i, jm));
        }
    }
}

double min_value(const ScalarField& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace ddch
