#pragma once

#include <functional>
#include <stdexcept>

namespace ddch {

// Truncated quadrature domain [-z_max, z_max] in the stretched interface
// variable, with n total nodes split into 16-point Gauss-Legendre panels.
struct QuadratureSpec {
    double z_max = 12.0;
    int n = 2048;

    void validate() const; // z_max >= 10, n >= 1000
    int panels() const { return n < 16 ? 1 : n / 16; }
};

// Thrown when a verified integral misses its tolerance.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double value, double tolerance)
        : std::runtime_error(what), value(value), tolerance(tolerance) {}
    double value;
    double tolerance;
};

// Leading-order interface profile U0(z) = (1 + tanh(3z))/2 and its derivative
// dU0/dz = 6 U0 (1 - U0) = (3/2) sech^2(3z).
double inner_profile(double z);
double inner_profile_dz(double z);

// Composite 16-point Gauss-Legendre quadrature of f over [a, b].
double quad_gl(const std::function<double(double)>& f, double a, double b, int panels);

// int (dU0/dz)^2 dz = int 36 U0^2(1-U0)^2 dz = 1; tolerance 1e-8.
double verify_kinetic_integral(const QuadratureSpec& spec = {});

// int dU0/dz dz = 1; tolerance 1e-8.
double verify_gradient_integral(const QuadratureSpec& spec = {});

// int g_0(U0) (dU0/dz)^2 dz = 1 with gamma = gamma*(p), 0 <= p < 2.
// Tolerance 1e-8 at p = 0 (where g = 1), 1e-6 otherwise. The integrand tail
// decays like e^{-6(2-p)|z|}, so p close to 2 needs z_max beyond the default.
double verify_energy_normalization(double p, const QuadratureSpec& spec = {});

// int G_0(U0) dU0/dz dz = 1 with eta = eta*(p), p >= 0.
// Tolerance 1e-8 at p = 0, 1e-6 otherwise.
double verify_diffusion_normalization(double p, const QuadratureSpec& spec = {});

} // namespace ddch
