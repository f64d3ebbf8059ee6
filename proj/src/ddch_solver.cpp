#include "ddch/ddch_solver.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace ddch {

const char* to_string(ModelKind k) {
    switch (k) {
    case ModelKind::V: return "v";
    case ModelKind::NV: return "nv";
    case ModelKind::DCH: return "dch";
    }
    return "?";
}

ModelConfig ModelConfig::make(ModelKind kind, double epsilon, double p) {
    ModelConfig c;
    c.model_kind = kind;
    c.epsilon = epsilon;
    c.p = p;
    switch (kind) {
    case ModelKind::V:
        c.chi = 1;
        c.normalization = Normalization::Energy;
        break;
    case ModelKind::NV:
        c.chi = 0;
        c.normalization = Normalization::Diffusion;
        break;
    case ModelKind::DCH:
        c.chi = 0;
        c.normalization = Normalization::Custom;
        c.custom_coefficient = 1.0;
        break;
    }
    c.validate();
    return c;
}

double ModelConfig::coefficient() const {
    switch (normalization) {
    case Normalization::Energy: return gamma_star(p);
    case Normalization::Diffusion: return eta_star(p);
    case Normalization::Custom: return custom_coefficient;
    }
    return custom_coefficient;
}

RestrictionParams ModelConfig::restriction() const {
    return RestrictionParams{p, alpha, epsilon, coefficient()};
}

void ModelConfig::validate() const {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("ModelConfig: epsilon must be positive");
    if (p < 0.0)
        throw std::invalid_argument("ModelConfig: p must be >= 0");
    if (alpha < 0.0)
        throw std::invalid_argument("ModelConfig: alpha must be >= 0");
    if (!(timestep() > 0.0))
        throw std::invalid_argument("ModelConfig: tau must be positive");
    if (!(solver_tol > 0.0) || solver_max_iter < 1)
        throw std::invalid_argument("ModelConfig: bad solver settings");
    switch (model_kind) {
    case ModelKind::V:
        if (chi != 1)
            throw std::invalid_argument("ModelConfig: model V requires chi = 1");
        if (p >= 2.0)
            throw std::invalid_argument("ModelConfig: model V requires p < 2 (finite energy)");
        break;
    case ModelKind::NV:
        if (chi != 0)
            throw std::invalid_argument("ModelConfig: model NV requires chi = 0");
        break;
    case ModelKind::DCH:
        if (chi != 0 || p != 0.0)
            throw std::invalid_argument("ModelConfig: DCH requires chi = 0 and p = 0");
        if (normalization != Normalization::Custom || custom_coefficient != 1.0)
            throw std::invalid_argument("ModelConfig: DCH requires coefficient 1");
        break;
    }
}

namespace {

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_dn(int i, int n) { return i == 0 ? n - 1 : i - 1; }

using Triplet = Eigen::Triplet<double>;

// u-row: u/tau - (1/eps) div(M_alpha(u^n) grad w) = u^n/tau, shared by all
// models.
void add_mass_rows(const ScalarField& u_n, const ModelConfig& config,
                   std::vector<Triplet>& trip, Eigen::VectorXd& rhs) {
    const GridSpec& g = u_n.grid;
    const int N = g.cells();
    const double tau = config.timestep();
    const double ax = 1.0 / (config.epsilon * g.hx() * g.hx());
    const double ay = 1.0 / (config.epsilon * g.hy() * g.hy());
    const RestrictionParams rp = config.restriction();

    ScalarField M(g);
    for (int k = 0; k < N; ++k)
        M.values[k] = mobility(u_n.values[k], rp);

    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const int k = u_n.idx(i, j);
            const double me = 0.5 * (M(i, j) + M(ip, j));
            const double mw = 0.5 * (M(i, j) + M(im, j));
            const double mn = 0.5 * (M(i, j) + M(i, jp));
            const double ms = 0.5 * (M(i, j) + M(i, jm));
            trip.emplace_back(k, k, 1.0 / tau);
            trip.emplace_back(k, N + u_n.idx(ip, j), -ax * me);
            trip.emplace_back(k, N + u_n.idx(im, j), -ax * mw);
            trip.emplace_back(k, N + u_n.idx(i, jp), -ay * mn);
            trip.emplace_back(k, N + u_n.idx(i, jm), -ay * ms);
            trip.emplace_back(k, N + k, ax * (me + mw) + ay * (mn + ms));
            rhs[k] = u_n.values[k] / tau;
        }
    }
}

SparseSystem finalize(int N, std::vector<Triplet>& trip, Eigen::VectorXd& rhs) {
    SparseSystem sys;
    sys.matrix.resize(2 * N, 2 * N);
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.rhs = std::move(rhs);
    return sys;
}

} // namespace

LinearizationTerms linearization_terms(const ScalarField& u_n, const ModelConfig& config) {
    const GridSpec& g = u_n.grid;
    const RestrictionParams rp = config.restriction();
    const double eps = config.epsilon;
    const double chi = config.chi;

    LinearizationTerms out{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int k = 0; k < g.cells(); ++k) {
        const double u = u_n.values[k];
        const double gv = restriction_g(u, rp);
        const double g1 = restriction_g_d1(u, rp);
        const double g2 = restriction_g_d2(u, rp);
        const double f = double_well(u);
        const double f1 = double_well_d1(u);
        const double f2 = double_well_d2(u);
        const double r = g1 * f1 + gv * f2;
        const double s = g1 * f1 + g2 * f;
        out.r.values[k] = r;
        out.s.values[k] = s;
        out.q.values[k] = (gv * f1 + chi * g1 * f - (r + chi * s) * u) / eps;
    }
    return out;
}

SparseSystem assemble_full(const ScalarField& u_n, const ModelConfig& config) {
    const GridSpec& g = u_n.grid;
    const int N = g.cells();
    const double eps = config.epsilon;
    const double chi = config.chi;
    const RestrictionParams rp = config.restriction();

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(N) * 12);
    Eigen::VectorXd rhs(2 * N);
    add_mass_rows(u_n, config, trip, rhs);

    const LinearizationTerms lin = linearization_terms(u_n, config);

    ScalarField gfield(g), g1field(g);
    for (int k = 0; k < N; ++k) {
        gfield.values[k] = restriction_g(u_n.values[k], rp);
        g1field.values[k] = restriction_g_d1(u_n.values[k], rp);
    }
    ScalarField gx, gy;
    gradient_centered(u_n, gx, gy);

    const double ax = eps / (g.hx() * g.hx());
    const double ay = eps / (g.hy() * g.hy());
    const double cx = 1.0 / (2.0 * g.hx());
    const double cy = 1.0 / (2.0 * g.hy());
    const double cross_coef = eps * (0.5 * chi - 1.0);

    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const int k = u_n.idx(i, j);
            const int row = N + k;

            trip.emplace_back(row, row, 1.0); // w^{n+1}

            // eps div(g_alpha(u^n) grad u^{n+1})
            const double ge = 0.5 * (gfield(i, j) + gfield(ip, j));
            const double gw = 0.5 * (gfield(i, j) + gfield(im, j));
            const double gn = 0.5 * (gfield(i, j) + gfield(i, jp));
            const double gs = 0.5 * (gfield(i, j) + gfield(i, jm));

            // eps g'(u^n)(chi/2 - 1) grad u^n . grad u^{n+1}, centered
            const double wx = cross_coef * g1field(i, j) * gx(i, j) * cx;
            const double wy = cross_coef * g1field(i, j) * gy(i, j) * cy;

            trip.emplace_back(row, u_n.idx(ip, j), ax * ge + wx);
            trip.emplace_back(row, u_n.idx(im, j), ax * gw - wx);
            trip.emplace_back(row, u_n.idx(i, jp), ay * gn + wy);
            trip.emplace_back(row, u_n.idx(i, jm), ay * gs - wy);
            trip.emplace_back(row, k,
                              -(ax * (ge + gw) + ay * (gn + gs)) -
                                  (lin.r.values[k] + chi * lin.s.values[k]) / eps);

            rhs[row] = lin.q.values[k];
        }
    }
    return finalize(N, trip, rhs);
}

SparseSystem assemble_model_v(const ScalarField& u_n, const ModelConfig& config) {
    if (config.chi != 1)
        throw std::invalid_argument("assemble_model_v requires chi = 1");
    return assemble_full(u_n, config);
}

SparseSystem assemble_model_nv(const ScalarField& u_n, const ModelConfig& config) {
    if (config.chi != 0)
        throw std::invalid_argument("assemble_model_nv requires chi = 0");
    const GridSpec& g = u_n.grid;
    const int N = g.cells();
    const double eps = config.epsilon;
    const RestrictionParams rp = config.restriction();
    const bool dch = config.model_kind == ModelKind::DCH;

    std::vector<Triplet> trip;
    trip.reserve(static_cast<size_t>(N) * 12);
    Eigen::VectorXd rhs(2 * N);
    add_mass_rows(u_n, config, trip, rhs);

    const double ax = eps / (g.hx() * g.hx());
    const double ay = eps / (g.hy() * g.hy());

    for (int j = 0; j < g.ny; ++j) {
        const int jp = wrap_up(j, g.ny), jm = wrap_dn(j, g.ny);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = wrap_up(i, g.nx), im = wrap_dn(i, g.nx);
            const int k = u_n.idx(i, j);
            const int row = N + k;
            const double u = u_n.values[k];
            const double G = dch ? 1.0 : restriction_G(u, rp);
            const double f1 = double_well_d1(u);
            const double f2 = double_well_d2(u);

            trip.emplace_back(row, row, G); // G_alpha(u^n) w^{n+1}

            // + eps Lap u^{n+1}
            trip.emplace_back(row, u_n.idx(ip, j), ax);
            trip.emplace_back(row, u_n.idx(im, j), ax);
            trip.emplace_back(row, u_n.idx(i, jp), ay);
            trip.emplace_back(row, u_n.idx(i, jm), ay);
            trip.emplace_back(row, k, -2.0 * (ax + ay) - f2 / eps);

            rhs[row] = (f1 - f2 * u) / eps;
        }
    }
    return finalize(N, trip, rhs);
}

SparseSystem assemble(const ScalarField& u_n, const ModelConfig& config) {
    config.validate();
    return config.model_kind == ModelKind::V ? assemble_model_v(u_n, config)
                                             : assemble_model_nv(u_n, config);
}

StepResult solve(const SparseSystem& system, const ModelConfig& config, const GridSpec& grid,
                 const Eigen::VectorXd* initial_guess) {
    const int n2 = static_cast<int>(system.matrix.rows());
    const int N = n2 / 2;
    if (grid.cells() != N)
        throw std::invalid_argument("solve: grid does not match system size");

    // Two-sided diagonal (Ruiz) equilibration: a few sweeps of row/column
    // max scaling. The raw system mixes scales of 1/tau, eps/h^2 and the
    // degenerate G ~ alpha*eps, which stalls the Krylov iteration otherwise.
    Eigen::SparseMatrix<double, Eigen::RowMajor> A = system.matrix;
    Eigen::VectorXd dr = Eigen::VectorXd::Ones(n2);
    Eigen::VectorXd dc = Eigen::VectorXd::Ones(n2);
    for (int sweep = 0; sweep < 4; ++sweep) {
        Eigen::VectorXd rmax = Eigen::VectorXd::Zero(n2);
        Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n2);
        for (int r = 0; r < n2; ++r)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it) {
                const double v = std::abs(it.value());
                rmax[r] = std::max(rmax[r], v);
                cmax[it.col()] = std::max(cmax[it.col()], v);
            }
        if ((rmax.array() == 0.0).any() || (cmax.array() == 0.0).any())
            throw SolverError("solve: structurally singular system", 0,
                              std::numeric_limits<double>::quiet_NaN());
        const Eigen::VectorXd rs = rmax.cwiseSqrt().cwiseInverse();
        const Eigen::VectorXd cs = cmax.cwiseSqrt().cwiseInverse();
        for (int r = 0; r < n2; ++r)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r); it; ++it)
                it.valueRef() *= rs[r] * cs[it.col()];
        dr = dr.cwiseProduct(rs);
        dc = dc.cwiseProduct(cs);
    }
    const Eigen::VectorXd b = dr.cwiseProduct(system.rhs);
    const Eigen::SparseMatrix<double> Ac = A;

    // Incomplete-LU preconditioned BiCGSTAB; the equilibrated-but-otherwise
    // unpreconditioned iteration below is the fallback (it converges too,
    // just in O(10^3) iterations at production resolution).
    int iters = 0;
    double resid = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd x;
    bool solved = false;
    {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
        solver.preconditioner().setDroptol(1e-3);
        solver.preconditioner().setFillfactor(10);
        solver.setTolerance(config.solver_tol);
        solver.setMaxIterations(config.solver_max_iter);
        solver.compute(Ac);
        if (initial_guess) {
            const Eigen::VectorXd y0 = initial_guess->cwiseQuotient(dc);
            x = solver.solveWithGuess(b, y0);
            // BiCGSTAB can break down (rho -> 0) when the guess is nearly
            // exact; a cold start recovers.
            if (!std::isfinite(solver.error()) || solver.info() != Eigen::Success)
                x = solver.solve(b);
        } else {
            x = solver.solve(b);
        }
        iters = static_cast<int>(solver.iterations());
        resid = solver.error();
        solved = solver.info() == Eigen::Success && resid <= config.solver_tol;
    }
    if (!solved) {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IdentityPreconditioner> fallback;
        fallback.setTolerance(config.solver_tol);
        fallback.setMaxIterations(config.solver_max_iter);
        fallback.compute(Ac);
        x = fallback.solve(b);
        iters += static_cast<int>(fallback.iterations());
        resid = fallback.error();
        solved = fallback.info() == Eigen::Success && resid <= config.solver_tol;
    }
    x = dc.cwiseProduct(x);

    if (!solved) {
        std::ostringstream msg;
        msg << "linear solve failed to converge: " << iters << " iterations, residual " << resid
            << " (tol " << config.solver_tol << ")";
        throw SolverError(msg.str(), iters, resid);
    }

    StepResult out;
    out.u_next = ScalarField(grid);
    out.w_next = ScalarField(grid);
    for (int k = 0; k < N; ++k) {
        out.u_next.values[k] = x[k];
        out.w_next.values[k] = x[N + k];
    }
    out.iterations = iters;
    out.residual = resid;
    return out;
}

StepResult step(const ScalarField& u_n, const ModelConfig& config, const ScalarField* prev_w) {
    config.validate();
    const GridSpec& g = u_n.grid;
    const int N = g.cells();
    const SparseSystem sys = assemble(u_n, config);

    // Seed with (u^n, previous w); for the first step derive w pointwise from
    // the w-row at u^{n+1} = u^n, which is the scheme's own implied potential.
    Eigen::VectorXd guess(2 * N);
    for (int k = 0; k < N; ++k)
        guess[k] = u_n.values[k];
    if (prev_w) {
        for (int k = 0; k < N; ++k)
            guess[N + k] = prev_w->values[k];
    } else {
        Eigen::VectorXd coupled(2 * N);
        for (int k = 0; k < N; ++k) {
            coupled[k] = u_n.values[k];
            coupled[N + k] = 0.0;
        }
        const Eigen::VectorXd wrow = sys.matrix * coupled;
        for (int k = 0; k < N; ++k) {
            double wcoef = 0.0;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, N + k);
                 it; ++it)
                if (it.col() == N + k)
                    wcoef = it.value();
            guess[N + k] = wcoef != 0.0 ? (sys.rhs[N + k] - wrow[N + k]) / wcoef : 0.0;
        }
    }

    StepResult result = solve(sys, config, g, &guess);

    // Enforce the divergence-form u-update exactly; mass then telescopes to
    // float roundoff regardless of the Krylov residual.
    ScalarField M(g);
    const RestrictionParams rp = config.restriction();
    for (int k = 0; k < N; ++k)
        M.values[k] = mobility(u_n.values[k], rp);
    const ScalarField flux = div_coeff_grad(M, result.w_next);
    const double c = config.timestep() / config.epsilon;
    for (int k = 0; k < N; ++k)
        result.u_next.values[k] = u_n.values[k] + c * flux.values[k];

    if (!all_finite(result.u_next) || !all_finite(result.w_next)) {
        std::ostringstream msg;
        msg << "non-finite values after step (model " << to_string(config.model_kind)
            << ", eps " << config.epsilon << ", p " << config.p << "): u in ["
            << min_value(result.u_next) << ", " << max_value(result.u_next) << "], iterations "
            << result.iterations << ", residual " << result.residual;
        throw SolverError(msg.str(), result.iterations, result.residual);
    }
    return result;
}

RunResult run(const ScalarField& u0, const ModelConfig& config, const StepObserver& observer) {
    config.validate();
    const double tau = config.timestep();
    if (config.t_end < tau)
        throw std::invalid_argument("run: t_end must be >= tau");
    const int n_steps = static_cast<int>(std::llround(config.t_end / tau));

    RunResult state{u0, ScalarField(u0.grid), 0};
    const ScalarField* prev_w = nullptr;
    for (int n = 0; n < n_steps; ++n) {
        StepResult r = step(state.u, config, prev_w);
        if (observer)
            observer(n, (n + 1) * tau, r);
        state.u = std::move(r.u_next);
        state.w = std::move(r.w_next);
        state.steps = n + 1;
        prev_w = &state.w;
    }
    return state;
}

} // namespace ddch
