#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nonlocal/error.hpp"

namespace nonlocal {

/// Coefficients v_n = (v, e_n) in the eigenbasis of A.
struct StateVector {
    std::vector<double> coeffs;

    StateVector() = default;
    explicit StateVector(std::size_t n) : coeffs(n, 0.0) {}
    explicit StateVector(std::vector<double> c) : coeffs(std::move(c)) {}

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t n) { return coeffs[n]; }
    double operator[](std::size_t n) const { return coeffs[n]; }
};

inline double norm(const StateVector& v) {
    double s = 0.0;
    for (double c : v.coeffs) s += c * c;
    return std::sqrt(s);
}

inline double distance(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) throw UsageError("distance: length mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += (a[n] - b[n]) * (a[n] - b[n]);
    return std::sqrt(s);
}

/// A = sum lambda_n (., e_n) e_n, truncated to N modes. Eigenfunctions are indexed from 1.
struct SpectralOperator {
    std::vector<double> eigenvalues;
    std::function<double(std::size_t, double)> eigenfunction;

    std::size_t modes() const { return eigenvalues.size(); }
    bool has_eigenfunctions() const { return static_cast<bool>(eigenfunction); }
    double lambda1() const { return eigenvalues.front(); }
};

/// Eigenpairs of (-theta d^2/dx^2)^gamma_pow on (0,1) with Dirichlet conditions.
inline SpectralOperator dirichlet_laplacian_1d(double theta, double gamma_pow, std::size_t N) {
    if (!(theta > 0.0) || !(gamma_pow > 0.0) || N < 1) throw UsageError("dirichlet_laplacian_1d: need theta > 0, gamma > 0, N >= 1");
    SpectralOperator op;
    op.eigenvalues.resize(N);
    const double pi = std::numbers::pi;
    for (std::size_t n = 1; n <= N; ++n) op.eigenvalues[n - 1] = std::pow(theta * double(n * n) * pi * pi, gamma_pow);
    op.eigenfunction = [](std::size_t n, double x) { return std::sqrt(2.0) * std::sin(double(n) * std::numbers::pi * x); };
    return op;
}

/// Operator given only by its spectrum (no physical-space synthesis).
inline SpectralOperator diagonal(std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) throw UsageError("diagonal: need at least one eigenvalue");
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        if (!(eigenvalues[n] > 0.0) || !std::isfinite(eigenvalues[n])) throw UsageError("diagonal: eigenvalues must be positive and finite");
        if (n > 0 && eigenvalues[n] < eigenvalues[n - 1]) throw UsageError("diagonal: eigenvalues must be nondecreasing");
    }
    SpectralOperator op;
    op.eigenvalues = std::move(eigenvalues);
    return op;
}

/// (sum lambda_n^{2 g} v_n^2)^{1/2}.
inline double norm_gamma(const SpectralOperator& op, const StateVector& v, double gamma_prime) {
    if (v.size() != op.modes()) throw UsageError("norm_gamma: length mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
        double w = gamma_prime == 0.0 ? 1.0 : std::pow(op.eigenvalues[n], 2.0 * gamma_prime);
        s += w * v[n] * v[n];
    }
    return std::sqrt(s);
}

/// Quadrature nodes and weights on (0,1).
struct SpatialGrid {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

inline SpatialGrid midpoint_grid(std::size_t M) {
    if (M == 0) throw UsageError("midpoint_grid: need at least one point");
    SpatialGrid g;
    g.x.resize(M);
    g.w.assign(M, 1.0 / double(M));
    for (std::size_t j = 0; j < M; ++j) g.x[j] = (double(j) + 0.5) / double(M);
    return g;
}

/// Eigenfunction values e_n(x_j) tabulated once for repeated synthesis/analysis.
class SpatialBasis {
public:
    SpatialBasis(const SpectralOperator& op, const SpatialGrid& grid) : grid_(grid), N_(op.modes()) {
        if (!op.has_eigenfunctions()) throw Unsupported("operator has no eigenfunction evaluator");
        if (grid.size() < 2 * N_) throw UsageError("spatial grid needs at least 2N points");
        table_.resize(grid.size() * N_);
        for (std::size_t j = 0; j < grid.size(); ++j)
            for (std::size_t n = 0; n < N_; ++n) table_[j * N_ + n] = op.eigenfunction(n + 1, grid.x[j]);
    }

    std::vector<double> synthesize(const StateVector& v) const {
        if (v.size() != N_) throw UsageError("synthesize: length mismatch");
        std::vector<double> u(grid_.size(), 0.0);
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            const double* e = &table_[j * N_];
            double s = 0.0;
            for (std::size_t n = 0; n < N_; ++n) s += v[n] * e[n];
            u[j] = s;
        }
        return u;
    }

    StateVector analyze(const std::vector<double>& values) const {
        if (values.size() != grid_.size()) throw UsageError("analyze: values do not match the grid");
        StateVector v(N_);
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            const double* e = &table_[j * N_];
            const double wu = grid_.w[j] * values[j];
            for (std::size_t n = 0; n < N_; ++n) v[n] += wu * e[n];
        }
        return v;
    }

    const SpatialGrid& grid() const { return grid_; }

private:
    SpatialGrid grid_;
    std::size_t N_;
    std::vector<double> table_;
};

inline std::vector<double> synthesize(const SpectralOperator& op, const StateVector& v, const SpatialGrid& grid) {
    return SpatialBasis(op, grid).synthesize(v);
}

inline StateVector analyze(const SpectralOperator& op, const std::vector<double>& values, const SpatialGrid& grid) {
    return SpatialBasis(op, grid).analyze(values);
}

}  // namespace nonlocal
