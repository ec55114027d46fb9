#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "nonlocal/error.hpp"
#include "nonlocal/spectral_operator.hpp"

namespace nonlocal {

/// f: H -> H in coefficient space with its local Lipschitz bound kappa(rho).
struct Nonlinearity {
    std::string kind;
    std::function<StateVector(const StateVector&)> evaluator;
    std::function<double(double)> kappa;
    double f_zero_norm = 0.0;
    /// lim sup ||f(v)|| / ||v|| as v -> 0 (used for the stability radius).
    double small_data_rate = 0.0;
    bool is_zero = false;

    StateVector operator()(const StateVector& v) const { return evaluator(v); }
};

inline Nonlinearity make_zero() {
    Nonlinearity f;
    f.kind = "zero";
    f.evaluator = [](const StateVector& v) { return StateVector(v.size()); };
    f.kappa = [](double) { return 0.0; };
    f.is_zero = true;
    return f;
}

/// f(v) = kappa_const * sin(v) (componentwise) + offset.
inline Nonlinearity make_global_lipschitz(double kappa_const, const StateVector& offset) {
    if (!(kappa_const >= 0.0) || !std::isfinite(kappa_const)) throw UsageError("global Lipschitz constant must be finite and >= 0");
    Nonlinearity f;
    f.kind = "global_lipschitz";
    f.evaluator = [kappa_const, offset](const StateVector& v) {
        if (v.size() != offset.size()) throw UsageError("nonlinearity: state length mismatch");
        StateVector out(v.size());
        for (std::size_t n = 0; n < v.size(); ++n) out[n] = kappa_const * std::sin(v[n]) + offset[n];
        return out;
    };
    f.kappa = [kappa_const](double) { return kappa_const; };
    f.f_zero_norm = norm(offset);
    f.small_data_rate = kappa_const;
    f.is_zero = kappa_const == 0.0 && f.f_zero_norm == 0.0;
    return f;
}

/// F(r) = a + b r^nu, G(x, y) = h_sup sin(y).
struct EnergyNonlinearitySpec {
    double a = 0.0;
    double b = 0.0;
    double nu = 1.0;
    double h_sup = 0.0;
};

inline double energy_F(const EnergyNonlinearitySpec& s, double r) {
    return s.nu == 0.0 ? s.a + s.b : s.a + s.b * std::pow(r, s.nu);
}

/// sup over [0, rho^2] of |F'|.
inline double energy_dF_sup(const EnergyNonlinearitySpec& s, double rho) {
    if (s.nu == 0.0) return 0.0;
    return s.b * s.nu * std::pow(rho * rho, s.nu - 1.0);
}

inline double energy_kappa(const EnergyNonlinearitySpec& s, double rho) {
    double growth = s.nu == 0.0 ? s.a + s.b : s.a + s.b * std::pow(rho, 2.0 * s.nu);
    return 2.0 * rho * rho * s.h_sup * energy_dF_sup(s, rho) + growth * s.h_sup;
}

/// f(v) = F(||u||^2) P_N[h_sup sin(u)] with u the synthesis of v on the grid.
inline Nonlinearity make_energy_nonlinearity(const EnergyNonlinearitySpec& spec, const SpectralOperator& op, const SpatialGrid& grid) {
    if (!(spec.a >= 0.0) || !(spec.b >= 0.0) || !(spec.h_sup >= 0.0) || !(spec.nu >= 0.0))
        throw UsageError("energy nonlinearity: a, b, nu, h_sup must be >= 0");
    if (spec.nu > 0.0 && spec.nu < 1.0)
        throw DomainError("energy nonlinearity: nu in (0,1) makes F non-differentiable at 0");
    auto basis = std::make_shared<const SpatialBasis>(op, grid);
    Nonlinearity f;
    f.kind = "energy";
    f.evaluator = [spec, basis](const StateVector& v) {
        std::vector<double> u = basis->synthesize(v);
        const auto& w = basis->grid().w;
        double r = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) r += w[j] * u[j] * u[j];
        const double F = energy_F(spec, r);
        for (double& x : u) x = spec.h_sup * std::sin(x);
        StateVector out = basis->analyze(u);
        for (double& c : out.coeffs) c *= F;
        return out;
    };
    f.kappa = [spec](double rho) { return energy_kappa(spec, rho); };
    f.f_zero_norm = 0.0;
    f.small_data_rate = (spec.nu == 0.0 ? spec.a + spec.b : spec.a) * spec.h_sup;
    f.is_zero = spec.h_sup == 0.0 || (spec.a == 0.0 && spec.b == 0.0);
    return f;
}

}  // namespace nonlocal
