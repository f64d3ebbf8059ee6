#pragma once

#include "ddch/ddch_solver.hpp"
#include "ddch/field_ops.hpp"
#include "ddch/sharp_interface.hpp"

#include <optional>

namespace ddch {

// Per-step scalar diagnostics. energy is F[u]; for models NV/DCH it is the
// restriction-free (g = 1) energy, reported as a monitor only since no energy
// is known for the non-variational flow.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    std::optional<double> a_x;
};

// F[u] = int g_alpha(u) ((1/eps) f(u) + (eps/2)|grad u|^2) dx for model V;
// g = 1 for NV/DCH.
double energy(const ScalarField& u, const ModelConfig& config);

// -(1/eps) int M_alpha(u) |grad w|^2 dx  (always <= 0).
double dissipation(const ScalarField& u, const ScalarField& w, const ModelConfig& config);

// Marching-squares contour of u at `level`, linearly interpolated on cell
// edges, returned counterclockwise. With several closed components the
// largest (by enclosed area) is returned and component_count reports how
// many were found. Throws std::runtime_error when the level is not crossed.
Curve extract_level_set(const ScalarField& u, double level = 0.5,
                        int* component_count = nullptr);

// x semi-axis: max_i |x_i - centroid_x| of the closed polygon.
double measure_ax(const Curve& curve);

// delta = |ax_ddch - ax_si| / ax_si
double delta_metric(double ax_ddch, double ax_si);

// (max(0, -min u), max(0, max u - 1)): how far u leaves [0, 1].
struct Overshoot {
    double under = 0.0;
    double over = 0.0;
};
Overshoot positivity_overshoot(const ScalarField& u);

DiagnosticsRecord diagnostics(double t, const ScalarField& u, const ScalarField& w,
                              const ModelConfig& config, bool with_ax);

} // namespace ddch
