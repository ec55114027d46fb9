#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "nonlocal/nonlinearity.hpp"

using namespace nonlocal;

namespace {

StateVector random_in_ball(std::mt19937_64& rng, std::size_t n, double rho) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u;
    StateVector v(n);
    for (auto& c : v.coeffs) c = g(rng);
    double scale = rho * std::pow(u(rng), 1.0 / double(n)) / norm(v);
    for (auto& c : v.coeffs) c *= scale;
    return v;
}

EnergyNonlinearitySpec quadratic_energy() { return {1.0, 1.0, 1.0, 2.0}; }

}  // namespace

TEST(ZeroNonlinearity, ReturnsZero) {
    Nonlinearity f = make_zero();
    StateVector out = f(StateVector(std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(norm(out), 0.0);
    EXPECT_TRUE(f.is_zero);
    EXPECT_EQ(f.kappa(10.0), 0.0);
}

TEST(GlobalLipschitz, SampledLipschitzBound) {
    StateVector offset(std::vector<double>{0.1, 0.0, -0.2, 0.0});
    Nonlinearity f = make_global_lipschitz(1.5, offset);
    EXPECT_NEAR(f.f_zero_norm, std::sqrt(0.05), 1e-15);
    EXPECT_NEAR(norm(f(StateVector(4))), f.f_zero_norm, 1e-15);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        StateVector a = random_in_ball(rng, 4, 10.0), b = random_in_ball(rng, 4, 10.0);
        worst = std::max(worst, distance(f(a), f(b)) / distance(a, b));
    }
    EXPECT_LE(worst, 1.5 + 1e-12);
    EXPECT_GT(worst, 1.0);
    EXPECT_THROW(make_global_lipschitz(-1.0, offset), UsageError);
    EXPECT_THROW(f(StateVector(3)), UsageError);
}

TEST(EnergyNonlinearity, VanishesAtZero) {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    Nonlinearity f = make_energy_nonlinearity(quadratic_energy(), op, midpoint_grid(16));
    EXPECT_EQ(norm(f(StateVector(4))), 0.0);
    EXPECT_EQ(f.f_zero_norm, 0.0);
    EXPECT_FALSE(f.is_zero);
}

TEST(EnergyNonlinearity, GrowthBound) {
    // ||f(v)|| <= F(||v||^2) h_sup ||v|| since |sin y| <= |y|
    EnergyNonlinearitySpec spec = quadratic_energy();
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 1.0, 6);
    Nonlinearity f = make_energy_nonlinearity(spec, op, midpoint_grid(24));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        StateVector v = random_in_ball(rng, 6, 3.0);
        double r = norm(v);
        EXPECT_LE(norm(f(v)), energy_F(spec, r * r) * spec.h_sup * r * (1.0 + 1e-12));
    }
}

TEST(EnergyNonlinearity, LocalLipschitzBoundHoldsOnBalls) {
    EnergyNonlinearitySpec spec = quadratic_energy();
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    Nonlinearity f = make_energy_nonlinearity(spec, op, midpoint_grid(16));
    std::mt19937_64 rng(3);
    for (double rho : {0.5, 1.0, 2.0}) {
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            StateVector a = random_in_ball(rng, 4, rho), b = random_in_ball(rng, 4, rho);
            worst = std::max(worst, distance(f(a), f(b)) / distance(a, b));
        }
        EXPECT_LE(worst, f.kappa(rho)) << rho;
        EXPECT_DOUBLE_EQ(f.kappa(rho), energy_kappa(spec, rho));
    }
}

TEST(EnergyNonlinearity, SmallDataRate) {
    EnergyNonlinearitySpec spec = quadratic_energy();
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    Nonlinearity f = make_energy_nonlinearity(spec, op, midpoint_grid(16));
    EXPECT_DOUBLE_EQ(f.small_data_rate, spec.a * spec.h_sup);
    StateVector v(std::vector<double>{1e-4, -2e-4, 0.5e-4, 1e-4});
    EXPECT_NEAR(norm(f(v)) / norm(v), spec.a * spec.h_sup, 0.05 * spec.a * spec.h_sup);
}

TEST(EnergyNonlinearity, ConstantFactorWhenNuIsZero) {
    EnergyNonlinearitySpec spec{0.5, 0.25, 0.0, 1.0};
    EXPECT_DOUBLE_EQ(energy_F(spec, 10.0), 0.75);
    EXPECT_DOUBLE_EQ(energy_dF_sup(spec, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(energy_kappa(spec, 3.0), 0.75);
}

TEST(EnergyNonlinearity, Errors) {
    SpectralOperator op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    EXPECT_THROW(make_energy_nonlinearity({1.0, 1.0, 0.5, 1.0}, op, midpoint_grid(16)), DomainError);
    EXPECT_THROW(make_energy_nonlinearity({-1.0, 1.0, 1.0, 1.0}, op, midpoint_grid(16)), UsageError);
    EXPECT_THROW(make_energy_nonlinearity(quadratic_energy(), op, midpoint_grid(7)), UsageError);
    EXPECT_THROW(make_energy_nonlinearity(quadratic_energy(), diagonal({1.0, 2.0}), midpoint_grid(16)), Unsupported);
}
