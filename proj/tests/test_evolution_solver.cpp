#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nonlocal/evolution_solver.hpp"
#include "nonlocal/special_functions.hpp"

using namespace nonlocal;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

EvolutionProblem single_mode(double alpha, std::size_t steps, double T = 1.0) {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, 1);
    p.pair = make_fractional(alpha);
    p.u0 = StateVector(std::vector<double>{1.0});
    p.mesh = make_mesh(T, steps);
    return p;
}

EvolutionProblem energy_problem(std::size_t modes, std::size_t steps) {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, modes);
    p.pair = make_two_term(0.4, 0.7, 1.0);
    p.u0 = StateVector(modes);
    for (std::size_t n = 0; n < modes; ++n) p.u0[n] = 0.01 / double(n + 1);
    p.mesh = make_mesh(2.0, steps);
    p.f = make_energy_nonlinearity({1.0, 1.0, 1.0, 4.0}, p.op, midpoint_grid(4 * modes));
    return p;
}

double max_ml_error(double alpha, std::size_t steps) {
    EvolutionProblem p = single_mode(alpha, steps);
    Trajectory tr = solve_linear(p);
    double worst = 0.0;
    for (std::size_t m = 0; m < p.mesh.size(); ++m)
        worst = std::max(worst, std::abs(tr.states[m][0] - ml_value(alpha, 1.0, -pi2 * std::pow(p.mesh[m], alpha))));
    return worst;
}

}  // namespace

TEST(LinearSolve, SingleModeMatchesMittagLeffler) {
    EXPECT_LT(max_ml_error(0.5, 1024), 2e-3);
    EXPECT_LT(max_ml_error(0.8, 1024), 2e-3);
}

TEST(LinearSolve, ErrorShrinksUnderRefinement) {
    double e1 = max_ml_error(0.5, 256), e2 = max_ml_error(0.5, 512);
    EXPECT_LT(e2, 0.5 * e1);
}

TEST(LinearSolve, InitialValueIsKept) {
    EvolutionProblem p = single_mode(0.5, 64);
    p.u0[0] = 3.25;
    EXPECT_EQ(solve_linear(p).states[0][0], 3.25);
}

TEST(LinearSolve, ConstantForcingMatchesResolventIdentity) {
    // u = s u0 + (1 - s) g / lambda for constant g
    EvolutionProblem p = single_mode(0.5, 512);
    const double g = 2.0;
    p.forcing = {std::vector<double>(p.mesh.size(), g)};
    Trajectory tr = solve_linear(p);
    RelaxationTable s = solve_s(p.pair, pi2, p.mesh);
    // the forcing term is pure product integration, first order in the opening cells
    for (std::size_t m = 0; m < p.mesh.size(); ++m)
        EXPECT_NEAR(tr.states[m][0], s[m] * 1.0 + (1.0 - s[m]) * g / pi2, p.mesh[m] < 0.05 ? 5e-3 : 5e-4) << m;
}

TEST(LinearSolve, ModesDecouple) {
    EvolutionProblem a;
    a.op = dirichlet_laplacian_1d(1.0, 1.0, 8);
    a.pair = make_tempered(0.5, 1.0);
    a.u0 = StateVector(8);
    for (std::size_t n = 0; n < 8; ++n) a.u0[n] = 1.0 / double(n + 1);
    a.mesh = make_mesh(1.0, 256);
    EvolutionProblem b = a;
    b.op = dirichlet_laplacian_1d(1.0, 1.0, 16);
    b.u0 = StateVector(16);
    for (std::size_t n = 0; n < 8; ++n) b.u0[n] = a.u0[n];
    Trajectory ta = solve_linear(a), tb = solve_linear(b);
    for (std::size_t m = 0; m < a.mesh.size(); ++m) {
        for (std::size_t n = 0; n < 8; ++n) EXPECT_NEAR(ta.states[m][n], tb.states[m][n], 1e-10);
        for (std::size_t n = 8; n < 16; ++n) EXPECT_EQ(tb.states[m][n], 0.0);
    }
}

TEST(LinearSolve, InputValidation) {
    EvolutionProblem p = single_mode(0.5, 32);
    p.u0 = StateVector(2);
    EXPECT_THROW(solve_linear(p), UsageError);
    p = single_mode(0.5, 32);
    p.forcing = {std::vector<double>(5, 0.0)};
    EXPECT_THROW(solve_linear(p), UsageError);
    p = single_mode(0.5, 32);
    p.u0[0] = std::nan("");
    EXPECT_THROW(solve_linear(p), UsageError);
}

TEST(SemilinearSolve, ZeroNonlinearityEqualsLinear) {
    EvolutionProblem p = single_mode(0.5, 256);
    Trajectory lin = solve_linear(p);
    p.f = make_zero();
    Trajectory semi = solve_semilinear(p);
    for (std::size_t m = 0; m < p.mesh.size(); ++m) EXPECT_NEAR(semi.states[m][0], lin.states[m][0], 1e-14);
}

TEST(SemilinearSolve, GlobalLipschitzBound) {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    p.pair = make_fractional(0.6);
    p.u0 = StateVector(std::vector<double>{1.0, 0.5, -0.5, 0.25});
    p.mesh = make_mesh(4.0, 512);
    StateVector offset(std::vector<double>{0.5, 0.0, 0.0, 0.0});
    const double kappa = 3.0;
    p.f = make_global_lipschitz(kappa, offset);
    Trajectory tr = solve_semilinear(p);
    const double bound = norm(p.u0) + norm(offset) / (pi2 - kappa);
    for (double n : tr.norms()) EXPECT_LE(n, bound);
}

TEST(SemilinearSolve, TrajectoriesContract) {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    p.pair = make_fractional(0.5);
    p.u0 = StateVector(std::vector<double>{1.0, 0.0, 0.5, 0.0});
    p.mesh = make_mesh(2.0, 256);
    p.f = make_global_lipschitz(2.0, StateVector(std::vector<double>{0.3, 0.1, 0.0, 0.0}));
    EvolutionProblem q = p;
    q.u0 = StateVector(std::vector<double>{-0.5, 0.2, 0.0, 0.1});
    Trajectory a = solve_semilinear(p), b = solve_semilinear(q);
    const double d0 = distance(p.u0, q.u0);
    for (std::size_t m = 0; m < p.mesh.size(); ++m) EXPECT_LE(distance(a.states[m], b.states[m]), d0 * (1.0 + 1e-12));
    EXPECT_LT(distance(a.states.back(), b.states.back()), 0.5 * d0);
}

TEST(SemilinearSolve, PicardFailureIsReported) {
    EvolutionProblem p = energy_problem(4, 64);
    SolverConfig cfg;
    cfg.picard_max_iters = 1;
    cfg.picard_tol = 1e-15;
    try {
        solve_semilinear(p, cfg);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.node, 1u);
        EXPECT_GT(e.residual, 0.0);
    }
    cfg.picard_max_iters = 0;
    EXPECT_THROW(solve_semilinear(p, cfg), UsageError);
}

TEST(SemilinearSolve, ParallelModesMatchSerial) {
    EvolutionProblem p = energy_problem(8, 256);
    SolverConfig serial, parallel;
    parallel.mode_parallelism = true;
    Trajectory a = solve_semilinear(p, serial), b = solve_semilinear(p, parallel);
    for (std::size_t m = 0; m < p.mesh.size(); ++m)
        for (std::size_t n = 0; n < 8; ++n) EXPECT_EQ(a.states[m][n], b.states[m][n]);
    EXPECT_GE(a.max_picard_iterations(), 2);
}

TEST(Residual, SmallForAccurateSolution) {
    EvolutionProblem p = single_mode(0.5, 1024);
    Trajectory tr = solve_linear(p);
    ResidualReport rep = residual_check(tr, p, 5e-3);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    EXPECT_GT(rep.scale, 0.0);
}

TEST(Residual, DetectsCorruptedTrajectory) {
    EvolutionProblem p = single_mode(0.5, 1024);
    Trajectory tr = solve_linear(p);
    tr.states[700][0] += 0.1;
    ResidualReport rep = residual_check(tr, p, 5e-3);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.worst_node, 700u);
}

TEST(Residual, ZeroProblemHasZeroResidual) {
    EvolutionProblem p = single_mode(0.5, 64);
    p.u0[0] = 0.0;
    ResidualReport rep = residual_check(solve_linear(p), p, 1e-12);
    EXPECT_EQ(rep.max_residual, 0.0);
    EXPECT_TRUE(rep.pass);
}
