#pragma once

#include <functional>
#include <vector>

namespace ddch {

// Uniform cell-centered grid on a rectangle, periodic in both directions.
// Cell (i,j) is centered at (x0 + (i+1/2)hx, y0 + (j+1/2)hy).
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    double cell_x(int i) const { return x0 + (i + 0.5) * hx(); }
    double cell_y(int j) const { return y0 + (j + 0.5) * hy(); }
    int cells() const { return nx * ny; }

    void validate() const; // nx, ny >= 8 and positive extents
    bool operator==(const GridSpec&) const = default;
};

// Scalar grid function, row-major (index j*nx + i).
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.nx) * g.ny, fill) {}

    int idx(int i, int j) const { return j * grid.nx + i; }
    double& operator()(int i, int j) { return values[idx(i, j)]; }
    double operator()(int i, int j) const { return values[idx(i, j)]; }
    int size() const { return static_cast<int>(values.size()); }
};

ScalarField make_field(const GridSpec& g, const std::function<double(double, double)>& f);

// 5-point periodic Laplacian, second order.
ScalarField laplacian(const ScalarField& f);

// div(c grad f) in flux form with arithmetic-mean face coefficients; the grid
// sum of the result telescopes to zero. Throws on grid mismatch.
ScalarField div_coeff_grad(const ScalarField& coeff, const ScalarField& f);

// Pointwise dot product of the centered-difference gradients of a and b.
ScalarField grad_dot_grad(const ScalarField& a, const ScalarField& b);

// Midpoint-rule integral hx*hy*sum(values).
double integrate(const ScalarField& f);

// Centered-difference gradient components (used by assembly and diagnostics).
void gradient_centered(const ScalarField& f, ScalarField& gx, ScalarField& gy);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);

} // namespace ddch
