#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nonlocal/error.hpp"

namespace nonlocal::quad {

/// Fixed 10-point Gauss-Legendre rule mapped to [a,b].
template <class F>
double gauss10(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1], full (not half) set.
template <unsigned N>
struct GaussLegendre {
    std::array<double, N> x{};
    std::array<double, N> w{};

    GaussLegendre() {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& ax = G::abscissa();
        const auto& aw = G::weights();
        // Boost stores the nonnegative half; mirror it.
        unsigned k = 0;
        for (std::size_t i = ax.size(); i-- > 0;) {
            if (ax[i] == 0.0) continue;
            x[k] = -ax[i];
            w[k] = aw[i];
            ++k;
        }
        for (std::size_t i = 0; i < ax.size(); ++i) {
            x[k] = ax[i];
            w[k] = aw[i];
            ++k;
        }
    }

    static const GaussLegendre& get() {
        static const GaussLegendre rule;
        return rule;
    }
};

/// Double-exponential rule on [a,b]. f may take (x, distance-to-nearest-endpoint).
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-12,
                 double* error_out = nullptr) {
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    double err = 0.0;
    double l1 = 0.0;
    double v;
    if constexpr (std::is_invocable_v<F, double, double>) {
        v = integrator.integrate(f, a, b, tol, &err, &l1);
    } else {
        // the two-argument form skips an endpoint assertion of the one-argument wrapper
        v = integrator.integrate([&](double x, double) { return f(x); }, a, b, tol, &err, &l1);
    }
    if (error_out) *error_out = err;
    if (!std::isfinite(v)) throw EvaluationError("tanh-sinh quadrature produced a non-finite value", err);
    return v;
}

/// Semi-infinite integral on [a, inf).
template <class F>
double exp_sinh(F&& f, double a, double tol = 1e-12, double* error_out = nullptr) {
    static thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
    double err = 0.0;
    double v = integrator.integrate([&](double x) { return f(x + a); }, 0.0,
                                    std::numeric_limits<double>::infinity(), tol, &err);
    if (error_out) *error_out = err;
    if (!std::isfinite(v)) throw EvaluationError("exp-sinh quadrature produced a non-finite value", err);
    return v;
}

/// Adaptive Gauss-Kronrod (15 point) on [a,b].
template <class F>
double gauss_kronrod(F&& f, double a, double b, double tol = 1e-10,
                     double* error_out = nullptr) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol, &err);
    if (error_out) *error_out = err;
    return v;
}

/// int_0^t f(t - tau) g(tau) dtau for f, g integrable but possibly singular at 0.
/// F1, G1 are the antiderivatives of f, g vanishing at 0. The interval is split at t/2 and
/// on each half the singular factor multiplies a difference that vanishes at the singularity.
template <class Ff, class FF1, class Gg, class GG1>
double singular_convolution(Ff&& f, FF1&& F1, Gg&& g, GG1&& G1, double t, double tol = 1e-10) {
    const double h = 0.5 * t;
    const double ft = f(t), gt = g(t);
    // sigma = t - tau in (0, h]: singular factor f(sigma)
    auto near_f = [&](double sigma) { return f(sigma) * (g(t - sigma) - gt); };
    // tau in (0, h]: singular factor g(tau)
    auto near_g = [&](double tau) { return g(tau) * (f(t - tau) - ft); };
    double a = tanh_sinh(near_f, 0.0, h, tol) + gt * F1(h);
    double b = tanh_sinh(near_g, 0.0, h, tol) + ft * G1(h);
    return a + b;
}

}  // namespace nonlocal::quad
