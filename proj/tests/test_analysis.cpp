#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "nonlocal/analysis.hpp"

using namespace nonlocal;

namespace {

Trajectory single_mode_trajectory(double alpha, std::size_t steps) {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, 1);
    p.pair = make_fractional(alpha);
    p.u0 = StateVector(std::vector<double>{1.0});
    p.mesh = make_mesh(1.0, steps);
    return solve_linear(p);
}

}  // namespace

TEST(Envelope, ConstantForcingClosedForm) {
    TimeMesh mesh = make_mesh(1.0, 1024);
    const double beta = 2.0;
    std::vector<double> env = gronwall_envelope(make_fractional(0.5), {1.0, 0.0, beta, {}}, mesh);
    EXPECT_EQ(env[0], 0.0);
    EXPECT_NEAR(env.back(), 0.5724164 * beta, 1e-2);
    std::vector<double> with_v0 = gronwall_envelope(make_fractional(0.5), {1.0, 1.0, 0.0, {}}, mesh);
    EXPECT_EQ(with_v0[0], 1.0);
    EXPECT_NEAR(with_v0.back(), 0.427583576155807, 5e-3);
}

TEST(Envelope, SampledForcingMatchesConstant) {
    TimeMesh mesh = make_mesh(2.0, 256);
    auto ctx = make_context(make_tempered(0.5, 1.0), mesh, 0);
    std::vector<double> a = gronwall_envelope(ctx, {3.0, 0.5, 1.5, {}});
    std::vector<double> b = gronwall_envelope(ctx, {3.0, 0.5, 0.0, std::vector<double>(mesh.size(), 1.5)});
    for (std::size_t m = 0; m < mesh.size(); ++m) EXPECT_NEAR(a[m], b[m], 1e-12);
    EXPECT_THROW(gronwall_envelope(ctx, {0.0, 1.0, 0.0, {}}), DomainError);
}

TEST(Envelope, DecayEnvelopeScalesRelaxation) {
    auto ctx = make_context(make_fractional(0.5), make_mesh(1.0, 256));
    std::vector<double> env = decay_envelope(ctx, 1.0, 2.0);
    RelaxationTable s = solve_s(ctx, 1.0);
    for (std::size_t m = 0; m < env.size(); ++m) EXPECT_DOUBLE_EQ(env[m], 2.0 * s[m]);
    EXPECT_THROW(decay_envelope(ctx, -1.0, 1.0), DomainError);
}

TEST(Decay, LinearTrajectoryStaysBelowEnvelope) {
    Trajectory tr = single_mode_trajectory(0.5, 512);
    auto ctx = make_context(make_fractional(0.5), tr.mesh);
    DecayReport rep = check_decay(tr, decay_envelope(ctx, std::numbers::pi * std::numbers::pi, 1.0), 1e-6);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.max_ratio, 1.0 + 1e-6);
    EXPECT_LT(rep.terminal_ratio, 0.1);
}

TEST(Decay, NegativeControlIsFlagged) {
    std::vector<double> norms{1.0, 0.9, 0.8, 0.7}, env{1.0, 0.8, 0.6, 0.4};
    DecayReport rep = check_decay(norms, env, 1e-6);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.violations, 3u);
    EXPECT_NEAR(rep.max_excess, 0.3, 1e-15);
    EXPECT_NEAR(rep.max_ratio, 1.75, 1e-15);
    EXPECT_NEAR(rep.terminal_ratio, 0.7, 1e-15);
    EXPECT_THROW(check_decay(norms, std::vector<double>(2), 1e-6), UsageError);
}

TEST(Holder, ConstantTrajectoryIsInfinitelySmooth) {
    Trajectory tr;
    tr.mesh = make_mesh(1.0, 64);
    tr.states.assign(65, StateVector(std::vector<double>{1.0, 2.0}));
    EXPECT_TRUE(std::isinf(estimate_holder_exponent(tr, 0.25).gamma_est));
}

TEST(Holder, SmoothAwayFromOrigin) {
    Trajectory tr = single_mode_trajectory(0.5, 1024);
    HolderEstimate h = estimate_holder_exponent(tr, 0.25);
    EXPECT_GE(h.gamma_est, 0.9);
    EXPECT_GT(h.c_est, 0.0);
    EXPECT_THROW(estimate_holder_exponent(tr, 0.0), UsageError);
    EXPECT_THROW(estimate_holder_exponent(tr, 1.0), UsageError);
}

TEST(DerivativeBound, StableUnderRefinement) {
    DerivativeBoundReport rep = check_derivative_bound(make_fractional(0.5), {1.0, 10.0, 100.0}, make_mesh(1.0, 512));
    EXPECT_TRUE(rep.bounded);
    EXPECT_LE(rep.ratio, 1.1);
    EXPECT_GT(rep.M_est, 0.0);
    EXPECT_THROW(check_derivative_bound(make_fractional(0.5), {}, make_mesh(1.0, 32)), UsageError);
    EXPECT_THROW(check_derivative_bound(make_fractional(0.5), {-1.0}, make_mesh(1.0, 32)), DomainError);
}

TEST(Gronwall, RandomSuiteHoldsForAllFamilies) {
    TimeMesh mesh = make_mesh(2.0, 128);
    for (const auto& p : {make_fractional(0.5), make_distributed_order(), make_tempered(0.5, 1.0), make_two_term(0.4, 0.7, 1.0)}) {
        GronwallSuiteReport rep = gronwall_random_suite(p, mesh, 50, 42);
        EXPECT_EQ(rep.cases, 50u);
        EXPECT_TRUE(rep.pass) << family_name(p.family) << " " << rep.worst_excess;
        EXPECT_LE(rep.worst_excess, 1e-8);
    }
}

TEST(Gronwall, SuiteIsSeedDeterministic) {
    TimeMesh mesh = make_mesh(2.0, 64);
    EXPECT_EQ(gronwall_random_suite(make_fractional(0.5), mesh, 20, 7).worst_excess,
              gronwall_random_suite(make_fractional(0.5), mesh, 20, 7).worst_excess);
}

TEST(Stability, RadiusHelpers) {
    EXPECT_DOUBLE_EQ(default_theta_margin(10.0, 4.0), 3.0);
    EXPECT_DOUBLE_EQ(default_eta(1.0, 0.0, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(default_eta(4.0, 1.0, 1.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(stability_radius(2.0, 8.0, 1.0), 0.25);
}
