#pragma once

#include "ddch/field_ops.hpp"
#include "ddch/model_functions.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>

namespace ddch {

enum class ModelKind { V, NV, DCH };
enum class Normalization { Energy, Diffusion, Custom };

const char* to_string(ModelKind k);

// Time integration setup for one model run. chi = 1 selects the variational
// flow, chi = 0 the non-variational/semi-implicit one; it is derived from
// model_kind and kept explicit because the scheme's w-row depends on it.
struct ModelConfig {
    ModelKind model_kind = ModelKind::NV;
    double epsilon = 0.2;
    double p = 1.0;
    double alpha = 1e-4;
    int chi = 0;
    Normalization normalization = Normalization::Diffusion;
    double custom_coefficient = 1.0;
    double tau = 0.0;    // <= 0 resolves to 1e-5 * epsilon
    double t_end = 3e-4;
    double solver_tol = 1e-9;
    int solver_max_iter = 4000;

    static ModelConfig make(ModelKind kind, double epsilon, double p);

    bool operator==(const ModelConfig&) const = default;

    double coefficient() const;       // eta or gamma per normalization
    double timestep() const { return tau > 0.0 ? tau : 1e-5 * epsilon; }
    RestrictionParams restriction() const;
    void validate() const;
};

// Coupled 2N x 2N system for one IMEX step; unknowns ordered u-block then
// w-block, both row-major over the grid.
struct SparseSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    Eigen::VectorXd rhs;
};

struct StepResult {
    ScalarField u_next;
    ScalarField w_next;
    int iterations = 0;
    double residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

// q, r, s of the linearized scheme, evaluated pointwise at u_n:
//   r = g' f' + g f'',  s = g' f' + g'' f,
//   q = (1/eps) g f' + (chi/eps) g' f - (1/eps)(r + chi s) u_n.
struct LinearizationTerms {
    ScalarField q, r, s;
};

LinearizationTerms linearization_terms(const ScalarField& u_n, const ModelConfig& config);

// Full linearized scheme (either chi); Model V uses chi = 1.
SparseSystem assemble_full(const ScalarField& u_n, const ModelConfig& config);
SparseSystem assemble_model_v(const ScalarField& u_n, const ModelConfig& config);

// Semi-implicit scheme with G_alpha(u^n) w^{n+1} + eps Lap u^{n+1}
// - (1/eps) f''(u^n) u^{n+1} on the w-row; DCH is the same with G = 1.
SparseSystem assemble_model_nv(const ScalarField& u_n, const ModelConfig& config);

SparseSystem assemble(const ScalarField& u_n, const ModelConfig& config);

// BiCGSTAB with left diagonal (row-max) equilibration. Throws SolverError on
// breakdown/non-convergence; never returns non-finite values silently.
StepResult solve(const SparseSystem& system, const ModelConfig& config, const GridSpec& grid,
                 const Eigen::VectorXd* initial_guess = nullptr);

// One IMEX step: assemble + solve, then re-evaluate the u-update in exact
// divergence form so the discrete mass telescopes independently of the Krylov
// residual. prev_w, when given, seeds the Krylov iteration.
StepResult step(const ScalarField& u_n, const ModelConfig& config,
                const ScalarField* prev_w = nullptr);

using StepObserver = std::function<void(int step_index, double t, const StepResult&)>;

struct RunResult {
    ScalarField u;
    ScalarField w;
    int steps = 0;
};

// March from u0 to t_end with fixed timestep; observers see every step.
RunResult run(const ScalarField& u0, const ModelConfig& config, const StepObserver& observer = {});

} // namespace ddch
