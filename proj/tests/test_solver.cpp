#include "ddch/ddch_solver.hpp"

#include "ddch/analysis.hpp"
#include "ddch/config_io.hpp"

#include <doctest.h>

#include <cmath>

using namespace ddch;

namespace {

GridSpec grid_default(int n) { return GridSpec{n, n, 4.0, 4.0, -2.0, -2.0}; }

ScalarField tanh_circle(const GridSpec& g, double R, double eps) {
    return initial_field(g, CircleShape{0.0, 0.0, R}, eps);
}

int row_nonzeros(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m, int row) {
    int n = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, row); it; ++it)
        if (it.value() != 0.0)
            ++n;
    return n;
}

} // namespace

TEST_CASE("model config invariants") {
    CHECK(ModelConfig::make(ModelKind::V, 0.2, 1.0).chi == 1);
    CHECK(ModelConfig::make(ModelKind::NV, 0.2, 2.0).chi == 0);
    CHECK(ModelConfig::make(ModelKind::DCH, 0.2, 0.0).coefficient() == 1.0);
    CHECK(ModelConfig::make(ModelKind::NV, 0.2, 2.0).coefficient() ==
          doctest::Approx(30.0).epsilon(1e-12));
    CHECK(ModelConfig::make(ModelKind::V, 0.2, 1.0).coefficient() ==
          doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ModelConfig::make(ModelKind::NV, 0.2, 1.0).timestep() ==
          doctest::Approx(2e-6).epsilon(1e-12));

    CHECK_THROWS_AS(ModelConfig::make(ModelKind::V, 0.2, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelConfig::make(ModelKind::DCH, 0.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelConfig::make(ModelKind::NV, -0.2, 1.0), std::invalid_argument);
}

TEST_CASE("linearization terms at a homogeneous state") {
    const GridSpec g = grid_default(8);
    ModelConfig cfg = ModelConfig::make(ModelKind::V, 0.2, 1.0);
    const RestrictionParams rp = cfg.restriction();

    SUBCASE("u = 1/2: r and s from the pointwise oracle") {
        const ScalarField u(g, 0.5);
        const LinearizationTerms lin = linearization_terms(u, cfg);
        const double r_expect = restriction_g(0.5, rp) * double_well_d2(0.5); // g'(1/2) = 0
        const double s_expect = restriction_g_d2(0.5, rp) * double_well(0.5);
        const double q_expect =
            (restriction_g(0.5, rp) * double_well_d1(0.5) +
             restriction_g_d1(0.5, rp) * double_well(0.5) - (r_expect + s_expect) * 0.5) /
            cfg.epsilon;
        for (int k = 0; k < g.cells(); ++k) {
            CHECK(lin.r.values[k] == doctest::Approx(r_expect).epsilon(1e-13));
            CHECK(lin.s.values[k] == doctest::Approx(s_expect).epsilon(1e-13));
            CHECK(lin.q.values[k] == doctest::Approx(q_expect).epsilon(1e-13));
        }
    }
    SUBCASE("p = 0, alpha = 0: constant restriction, r = f''/gamma, s = 0") {
        ModelConfig flat = ModelConfig::make(ModelKind::NV, 0.2, 0.0);
        flat.alpha = 0.0;
        const ScalarField u(g, 0.37);
        const LinearizationTerms lin = linearization_terms(u, flat);
        const double gamma = flat.coefficient(); // eta*(0) = 1
        for (int k = 0; k < g.cells(); ++k) {
            CHECK(lin.r.values[k] ==
                  doctest::Approx(double_well_d2(0.37) / gamma).epsilon(1e-13));
            CHECK(lin.s.values[k] == 0.0);
        }
    }
    SUBCASE("generic field: r and s match their definitions pointwise") {
        const ScalarField u = tanh_circle(g, 0.9, 0.4);
        cfg.epsilon = 0.4;
        const RestrictionParams rp4 = cfg.restriction();
        const LinearizationTerms lin = linearization_terms(u, cfg);
        for (int k = 0; k < g.cells(); ++k) {
            const double uv = u.values[k];
            const double r_expect = restriction_g_d1(uv, rp4) * double_well_d1(uv) +
                                    restriction_g(uv, rp4) * double_well_d2(uv);
            const double s_expect = restriction_g_d1(uv, rp4) * double_well_d1(uv) +
                                    restriction_g_d2(uv, rp4) * double_well(uv);
            CHECK(lin.r.values[k] == doctest::Approx(r_expect).epsilon(1e-12));
            CHECK(lin.s.values[k] == doctest::Approx(s_expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("singular inputs error out instead of producing NaN") {
    const GridSpec g = grid_default(8);
    ModelConfig cfg = ModelConfig::make(ModelKind::V, 0.2, 1.0);
    cfg.alpha = 0.0;
    ScalarField u(g, 0.5);
    u(2, 2) = 0.0; // pure phase touches the singular restriction
    CHECK_THROWS_AS(linearization_terms(u, cfg), std::domain_error);
    CHECK_THROWS_AS(assemble(u, cfg), std::domain_error);
}

TEST_CASE("matrix structure") {
    const GridSpec g = grid_default(16);
    const int N = g.cells();
    const ScalarField u = tanh_circle(g, 0.75, 0.4);

    for (ModelKind kind : {ModelKind::V, ModelKind::NV, ModelKind::DCH}) {
        ModelConfig cfg = ModelConfig::make(kind, 0.4, kind == ModelKind::DCH ? 0.0 : 1.0);
        const SparseSystem sys = assemble(u, cfg);
        REQUIRE(sys.matrix.rows() == 2 * N);
        REQUIRE(sys.rhs.size() == 2 * N);

        const double inv_tau = 1.0 / cfg.timestep();
        for (int k = 0; k < N; ++k) {
            // block-row 1: u-diagonal is exactly 1/tau, w-entries sum to zero
            double udiag = 0.0, wsum = 0.0, wmax = 0.0;
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, k); it;
                 ++it) {
                if (it.col() == k)
                    udiag = it.value();
                else {
                    CHECK(it.col() >= N);
                    wsum += it.value();
                    wmax = std::max(wmax, std::abs(it.value()));
                }
            }
            CHECK(udiag == inv_tau);
            CHECK(std::abs(wsum) <= 1e-12 * std::max(wmax, 1.0));
            CHECK(row_nonzeros(sys.matrix, k) <= 11);
            CHECK(row_nonzeros(sys.matrix, N + k) <= 11);
        }
    }
}

TEST_CASE("with chi = 0 the assembled system does not involve s") {
    const GridSpec g = grid_default(16);
    const ScalarField u = tanh_circle(g, 0.75, 0.4);
    ModelConfig cfg = ModelConfig::make(ModelKind::NV, 0.4, 1.0); // chi = 0
    const SparseSystem full = assemble_full(u, cfg);
    const LinearizationTerms lin = linearization_terms(u, cfg);

    // reconstruct the u-diagonal of the w-row from r alone
    const int N = g.cells();
    const RestrictionParams rp = cfg.restriction();
    ScalarField gf(g);
    for (int k = 0; k < N; ++k)
        gf.values[k] = restriction_g(u.values[k], rp);
    const double ax = cfg.epsilon / (g.hx() * g.hx());
    const double ay = cfg.epsilon / (g.hy() * g.hy());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = u.idx(i, j);
            const double ge = 0.5 * (gf(i, j) + gf((i + 1) % g.nx, j));
            const double gw = 0.5 * (gf(i, j) + gf((i + g.nx - 1) % g.nx, j));
            const double gn = 0.5 * (gf(i, j) + gf(i, (j + 1) % g.ny));
            const double gs = 0.5 * (gf(i, j) + gf(i, (j + g.ny - 1) % g.ny));
            const double expect = -(ax * (ge + gw) + ay * (gn + gs)) - lin.r.values[k] / cfg.epsilon;
            CHECK(full.matrix.coeff(N + k, k) == doctest::Approx(expect).epsilon(1e-13));
        }
}

TEST_CASE("NV with p = 0, alpha = 0 assembles the DCH system") {
    const GridSpec g = grid_default(16);
    const ScalarField u = tanh_circle(g, 0.75, 0.4);

    ModelConfig nv0 = ModelConfig::make(ModelKind::NV, 0.4, 0.0);
    nv0.alpha = 0.0;
    nv0.normalization = Normalization::Custom;
    nv0.custom_coefficient = 1.0;
    ModelConfig dch = ModelConfig::make(ModelKind::DCH, 0.4, 0.0);
    dch.alpha = 0.0;

    const SparseSystem a = assemble(u, nv0);
    const SparseSystem b = assemble(u, dch);
    const Eigen::SparseMatrix<double, Eigen::RowMajor> diff = a.matrix - b.matrix;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.rhs - b.rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("NV w-row reproduces the rearranged chemical-potential equation") {
    // Moving eps Lap u across the equality: G w = (1/eps) f'(u) - eps Lap u;
    // at u^{n+1} = u^n the assembled w-row must be consistent with that form.
    const GridSpec g = grid_default(32);
    const double eps = 0.4;
    const ScalarField u = tanh_circle(g, 0.75, eps);
    const ModelConfig cfg = ModelConfig::make(ModelKind::NV, eps, 1.0);
    const SparseSystem sys = assemble(u, cfg);
    const int N = g.cells();

    const ScalarField lap = laplacian(u);
    const RestrictionParams rp = cfg.restriction();
    Eigen::VectorXd state(2 * N);
    for (int k = 0; k < N; ++k) {
        state[k] = u.values[k];
        const double G = restriction_G(u.values[k], rp);
        state[N + k] = (double_well_d1(u.values[k]) / eps - eps * lap.values[k]) / G;
    }
    const Eigen::VectorXd residual = sys.matrix * state - sys.rhs;
    double wmax = 0.0;
    for (int k = 0; k < N; ++k)
        wmax = std::max(wmax, std::abs(residual[N + k]));
    CHECK(wmax < 1e-10);
}

TEST_CASE("solve returns the rhs for an identity system") {
    const GridSpec g = grid_default(8);
    const int N = g.cells();
    SparseSystem sys;
    sys.matrix.resize(2 * N, 2 * N);
    sys.matrix.setIdentity();
    sys.rhs.resize(2 * N);
    for (int k = 0; k < 2 * N; ++k)
        sys.rhs[k] = std::sin(0.1 * k);
    const ModelConfig cfg = ModelConfig::make(ModelKind::NV, 0.2, 1.0);
    const StepResult r = solve(sys, cfg, g);
    CHECK(r.iterations <= 1);
    for (int k = 0; k < N; ++k) {
        CHECK(r.u_next.values[k] == doctest::Approx(sys.rhs[k]).epsilon(1e-12));
        CHECK(r.w_next.values[k] == doctest::Approx(sys.rhs[N + k]).epsilon(1e-12));
    }
}

TEST_CASE("homogeneous states are fixed points of all three models") {
    const GridSpec g = grid_default(24);
    const ScalarField u0(g, 0.3);
    for (ModelKind kind : {ModelKind::V, ModelKind::NV, ModelKind::DCH}) {
        ModelConfig cfg = ModelConfig::make(kind, 0.4, kind == ModelKind::DCH ? 0.0 : 1.0);
        cfg.t_end = 10.0 * cfg.timestep();
        const RunResult res = run(u0, cfg);
        CHECK(res.steps == 10);
        for (double v : res.u.values)
            CHECK(v == doctest::Approx(0.3).epsilon(1e-13));
        const double w0 = res.w.values[0];
        for (double v : res.w.values)
            CHECK(v == doctest::Approx(w0).epsilon(1e-10));
    }
}

TEST_CASE("pure phase stays put under NV") {
    const GridSpec g = grid_default(16);
    const ScalarField u0(g, 0.0);
    ModelConfig cfg = ModelConfig::make(ModelKind::NV, 0.4, 1.0);
    const StepResult r = step(u0, cfg);
    for (double v : r.u_next.values)
        CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("NV smoke run converges and conserves mass") {
    const GridSpec g = grid_default(64);
    const double eps = 0.4;
    const ScalarField u0 = tanh_circle(g, 0.75, eps);
    ModelConfig cfg = ModelConfig::make(ModelKind::NV, eps, 1.0);
    cfg.t_end = 100 * cfg.timestep();

    const double mass0 = integrate(u0);
    double max_resid = 0.0;
    const RunResult res = run(u0, cfg, [&](int, double, const StepResult& r) {
        max_resid = std::max(max_resid, r.residual);
    });
    CHECK(res.steps == 100);
    CHECK(max_resid <= cfg.solver_tol);
    CHECK(std::abs(integrate(res.u) - mass0) / std::abs(mass0) < 1e-8);
    CHECK(all_finite(res.u));
}

TEST_CASE("model V smoke run on a tanh circle") {
    const GridSpec g = grid_default(128);
    const double eps = 0.2;
    const ScalarField u0 = tanh_circle(g, 0.75, eps);
    ModelConfig cfg = ModelConfig::make(ModelKind::V, eps, 1.0);
    const SparseSystem sys = assemble(u0, cfg);
    for (int k = 0; k < sys.rhs.size(); ++k)
        CHECK(std::isfinite(sys.rhs[k]));

    cfg.t_end = 5 * cfg.timestep();
    const RunResult res = run(u0, cfg);
    CHECK(all_finite(res.u));
    CHECK(std::abs(integrate(res.u) - integrate(u0)) / integrate(u0) < 1e-10);
}

TEST_CASE("ellipse A_x decreases under NV") {
    const GridSpec g = grid_default(96);
    const double eps = 0.4;
    const ScalarField u0 = initial_field(g, EllipseShape{1.0, 0.5}, eps);
    ModelConfig cfg = ModelConfig::make(ModelKind::NV, eps, 1.0);
    cfg.t_end = 40 * cfg.timestep();
    const RunResult res = run(u0, cfg);
    const double ax0 = measure_ax(extract_level_set(u0));
    const double ax1 = measure_ax(extract_level_set(res.u));
    CHECK(ax0 == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(ax1 < ax0);
}

TEST_CASE("DCH energy decays and balances the dissipation integral") {
    const GridSpec g = grid_default(96);
    const double eps = 0.4;
    const ScalarField u0 = initial_field(g, EllipseShape{1.0, 0.5}, eps);
    ModelConfig cfg = ModelConfig::make(ModelKind::DCH, eps, 0.0);
    cfg.t_end = 100 * cfg.timestep();

    const double F0 = energy(u0, cfg);
    double prev = F0;
    double dissipated = 0.0;
    int increases = 0;
    const RunResult res = run(u0, cfg, [&](int, double, const StepResult& r) {
        const double F = energy(r.u_next, cfg);
        if (F > prev * (1.0 + 1e-8))
            ++increases;
        prev = F;
        dissipated += cfg.timestep() * dissipation(r.u_next, r.w_next, cfg);
    });
    const double F1 = energy(res.u, cfg);
    CHECK(increases == 0);
    CHECK(F1 < F0);
    // discrete energy balance: int d_t F ~ sum tau * dissipation within 10%
    CHECK(std::abs((F1 - F0) - dissipated) / std::abs(F1 - F0) < 0.10);
}

TEST_CASE("run rejects t_end below one step") {
    const GridSpec g = grid_default(16);
    ModelConfig cfg = ModelConfig::make(ModelKind::NV, 0.4, 1.0);
    cfg.t_end = 0.1 * cfg.timestep();
    CHECK_THROWS_AS(run(ScalarField(g, 0.5), cfg), std::invalid_argument);
}

TEST_CASE("non-convergence raises a SolverError carrying iteration data") {
    const GridSpec g = grid_default(32);
    const ScalarField u0 = tanh_circle(g, 0.75, 0.2);
    ModelConfig cfg = ModelConfig::make(ModelKind::V, 0.2, 1.0);
    cfg.solver_max_iter = 1;
    cfg.solver_tol = 1e-14;
    try {
        step(u0, cfg);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.iterations <= 2); // preconditioned attempt plus fallback
        CHECK(e.residual > 1e-14);
    }
}
