#include "ddch/asymptotics.hpp"

#include "ddch/model_functions.hpp"

#include <cmath>
#include <sstream>

namespace ddch {

void QuadratureSpec::validate() const {
    if (z_max < 10.0)
        throw std::invalid_argument("QuadratureSpec: z_max must be >= 10");
    if (n < 1000)
        throw std::invalid_argument("QuadratureSpec: n must be >= 1000");
}

namespace {

// 16-point Gauss-Legendre abscissae/weights on [-1, 1] (positive half).
constexpr double kGlNode[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlWeight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

// U0(1-U0) = sech^2(3z)/4, evaluated without overflow for large |z|.
inline double profile_product(double z) {
    const double e = std::exp(-6.0 * std::abs(z));
    const double d = 1.0 + e;
    return e / (d * d);
}

double checked(double value, double tolerance, const char* name) {
    if (std::abs(value - 1.0) > tolerance) {
        std::ostringstream msg;
        msg.precision(16);
        msg << name << " = " << value << " misses 1 by " << std::abs(value - 1.0)
            << " (tolerance " << tolerance << ")";
        throw ToleranceError(msg.str(), value, tolerance);
    }
    return value;
}

} // namespace

double inner_profile(double z) {
    return 0.5 * (1.0 + std::tanh(3.0 * z));
}

double inner_profile_dz(double z) {
    return 6.0 * profile_product(z);
}

double quad_gl(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1)
        throw std::invalid_argument("quad_gl: panels must be >= 1");
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * w;
        const double half = 0.5 * w;
        double s = 0.0;
        for (int k = 0; k < 8; ++k)
            s += kGlWeight[k] * (f(mid - half * kGlNode[k]) + f(mid + half * kGlNode[k]));
        total += half * s;
    }
    return total;
}

double verify_kinetic_integral(const QuadratureSpec& spec) {
    spec.validate();
    const double v = quad_gl(
        [](double z) {
            const double s = profile_product(z);
            return 36.0 * s * s;
        },
        -spec.z_max, spec.z_max, spec.panels());
    return checked(v, 1e-8, "kinetic integral");
}

double verify_gradient_integral(const QuadratureSpec& spec) {
    spec.validate();
    const double v = quad_gl(inner_profile_dz, -spec.z_max, spec.z_max, spec.panels());
    return checked(v, 1e-8, "gradient integral");
}

double verify_energy_normalization(double p, const QuadratureSpec& spec) {
    spec.validate();
    const double gamma = gamma_star(p);
    // g_0(U0) (dU0/dz)^2 = (36/gamma) [U0(1-U0)]^{2-p}, stable for large |z|
    // where the direct g_0 evaluation would underflow.
    const double v = quad_gl(
        [p, gamma](double z) {
            return 36.0 / gamma * std::pow(profile_product(z), 2.0 - p);
        },
        -spec.z_max, spec.z_max, spec.panels());
    return checked(v, p == 0.0 ? 1e-8 : 1e-6, "energy normalization integral");
}

double verify_diffusion_normalization(double p, const QuadratureSpec& spec) {
    spec.validate();
    const double eta = eta_star(p);
    // G_0(U0) dU0/dz = 6 eta [U0(1-U0)]^{p+1}
    const double v = quad_gl(
        [p, eta](double z) {
            return 6.0 * eta * std::pow(profile_product(z), p + 1.0);
        },
        -spec.z_max, spec.z_max, spec.panels());
    return checked(v, p == 0.0 ? 1e-8 : 1e-6, "diffusion normalization integral");
}

} // namespace ddch
