#include "ddch/model_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddch {

namespace {

// phi(u) = u^2(1-u)^2 and derivatives; phi >= 0 for all real u.
inline double phi(double u) {
    const double v = u * (1.0 - u);
    return v * v;
}

inline double phi_d1(double u) {
    return 2.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

inline double phi_d2(double u) {
    return 2.0 - 12.0 * u + 12.0 * u * u;
}

// d/du [phi^p]. At phi = 0 (u in {0,1}) the one-sided limits are 0 for
// p > 1/2, (1-2u) for p = 1/2, and divergent below that.
double phi_pow_d1(double u, double p) {
    if (p == 0.0)
        return 0.0;
    const double ph = phi(u);
    if (ph > 0.0)
        return p * std::pow(ph, p - 1.0) * phi_d1(u);
    if (p >= 1.0)
        return (p == 1.0) ? phi_d1(u) : 0.0;
    if (p > 0.5)
        return 0.0;
    if (p == 0.5)
        return 1.0 - 2.0 * u;
    throw std::domain_error("d/du (u^2(1-u)^2)^p is unbounded at the pure phases for p < 1/2");
}

// d^2/du^2 [phi^p]; same endpoint caveats, divergent for p < 1.
double phi_pow_d2(double u, double p) {
    if (p == 0.0)
        return 0.0;
    const double ph = phi(u);
    if (ph > 0.0) {
        const double d1 = phi_d1(u);
        return p * ((p - 1.0) * std::pow(ph, p - 2.0) * d1 * d1 +
                    std::pow(ph, p - 1.0) * phi_d2(u));
    }
    if (p > 1.0)
        return 0.0;
    if (p == 1.0)
        return phi_d2(u);
    throw std::domain_error("d^2/du^2 (u^2(1-u)^2)^p is unbounded at the pure phases for p < 1");
}

} // namespace

double double_well(double u, const PotentialParams& pot) {
    return 0.25 * pot.omega * phi(u);
}

double double_well_d1(double u, const PotentialParams& pot) {
    return 0.5 * pot.omega * u * (1.0 - u) * (1.0 - 2.0 * u);
}

double double_well_d2(double u, const PotentialParams& pot) {
    return 0.5 * pot.omega * (1.0 - 6.0 * u + 6.0 * u * u);
}

double mobility(double u, const RestrictionParams& r, const PotentialParams& pot) {
    return pot.mu * phi(u) + r.alpha * r.epsilon;
}

double restriction_G(double u, const RestrictionParams& r) {
    const double eta = r.coefficient;
    const double ae = r.alpha * r.epsilon;
    return std::sqrt(eta * eta * std::pow(phi(u), r.p) + ae * ae);
}

double restriction_g(double u, const RestrictionParams& r) {
    const double gamma = r.coefficient;
    const double ae = r.alpha * r.epsilon;
    const double den2 = gamma * gamma * std::pow(phi(u), r.p) + ae * ae;
    if (den2 <= 0.0)
        throw std::domain_error("restriction_g singular: alpha = 0 and u at a pure phase (u = " +
                                std::to_string(u) + ")");
    return 1.0 / std::sqrt(den2);
}

double restriction_g_d1(double u, const RestrictionParams& r) {
    if (r.p == 0.0)
        return 0.0;
    const double gamma = r.coefficient;
    const double ae = r.alpha * r.epsilon;
    const double D = gamma * gamma * std::pow(phi(u), r.p) + ae * ae;
    if (D <= 0.0)
        throw std::domain_error("restriction_g_d1 singular: alpha = 0 and u at a pure phase");
    const double Dp = gamma * gamma * phi_pow_d1(u, r.p);
    return -0.5 * Dp / (D * std::sqrt(D));
}

double restriction_g_d2(double u, const RestrictionParams& r) {
    if (r.p == 0.0)
        return 0.0;
    const double gamma = r.coefficient;
    const double ae = r.alpha * r.epsilon;
    const double D = gamma * gamma * std::pow(phi(u), r.p) + ae * ae;
    if (D <= 0.0)
        throw std::domain_error("restriction_g_d2 singular: alpha = 0 and u at a pure phase");
    const double Dp = gamma * gamma * phi_pow_d1(u, r.p);
    const double Dpp = gamma * gamma * phi_pow_d2(u, r.p);
    const double D32 = D * std::sqrt(D);
    return 0.75 * Dp * Dp / (D32 * D) - 0.5 * Dpp / D32;
}

double eta_star(double p) {
    if (p < 0.0)
        throw std::domain_error("eta_star requires p >= 0");
    const double g1 = std::tgamma(1.0 + p);
    return std::tgamma(2.0 + 2.0 * p) / (g1 * g1);
}

double gamma_star(double p) {
    if (p < 0.0 || p >= 2.0)
        throw std::domain_error("gamma_star requires 0 <= p < 2 (diverges as p -> 2)");
    const double g = std::tgamma(2.0 - p);
    return 6.0 * g * g / std::tgamma(4.0 - 2.0 * p);
}

double tanh_profile(double r, double epsilon) {
    if (epsilon <= 0.0)
        throw std::domain_error("tanh_profile requires epsilon > 0");
    return 0.5 * (1.0 - std::tanh(3.0 * r / epsilon));
}

} // namespace ddch
