#pragma once

namespace ddch {

// Quartic symmetric double well f(u) = (omega/4) u^2 (1-u)^2 with minima at
// the pure phases u = 0, 1, and the degenerate mobility scale mu.
struct PotentialParams {
    double omega = 72.0;
    double mu = 36.0;
};

// Parameters of the restriction functions:
//   p           degeneracy exponent (>= 0)
//   alpha       regularization strength (>= 0); alpha = 0 is the singular model
//   epsilon     interface width (> 0)
//   coefficient normalization constant: eta for the diffusion restriction G,
//               gamma for the energy restriction g
struct RestrictionParams {
    double p = 1.0;
    double alpha = 0.0;
    double epsilon = 0.2;
    double coefficient = 6.0;
};

// f, f', f''
double double_well(double u, const PotentialParams& pot = {});
double double_well_d1(double u, const PotentialParams& pot = {});
double double_well_d2(double u, const PotentialParams& pot = {});

// M_alpha(u) = mu u^2(1-u)^2 + alpha*epsilon
double mobility(double u, const RestrictionParams& r, const PotentialParams& pot = {});

// Diffusion restriction G_alpha(u) = sqrt(eta^2 (u^2(1-u)^2)^p + alpha^2 eps^2).
// At alpha = 0 this is eta |u|^p |1-u|^p.
double restriction_G(double u, const RestrictionParams& r);

// Energy restriction g_alpha(u) = 1 / sqrt(gamma^2 (u^2(1-u)^2)^p + alpha^2 eps^2)
// and its first two derivatives. Throws std::domain_error at the pure phases
// when alpha = 0 and p > 0 (g is singular there).
double restriction_g(double u, const RestrictionParams& r);
double restriction_g_d1(double u, const RestrictionParams& r);
double restriction_g_d2(double u, const RestrictionParams& r);

// Diffusion normalization eta*(p) = Gamma(2+2p)/Gamma(1+p)^2, p >= 0.
double eta_star(double p);

// Energy normalization gamma*(p) = 6 Gamma(2-p)^2/Gamma(4-2p), 0 <= p < 2
// (diverges as p -> 2).
double gamma_star(double p);

// Equilibrium interface profile u_I(r) = (1 - tanh(3r/eps))/2, with r the
// signed distance taken positive outside the enclosed shape (u -> 0 outside,
// u -> 1 inside, u = 1/2 on the interface).
double tanh_profile(double r, double epsilon);

} // namespace ddch
