#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "nonlocal/error.hpp"
#include "nonlocal/evolution_solver.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/time_mesh.hpp"
#include "nonlocal/volterra_resolvent.hpp"

namespace nonlocal {

/// Comparison data: rate mu (already reduced by the Lipschitz rate), initial bound v0 and
/// forcing beta, constant unless beta_samples is non-empty.
struct EnvelopeSpec {
    double mu = 0.0;
    double v0 = 0.0;
    double beta_const = 0.0;
    std::vector<double> beta_samples;
};

/// s(t, mu) v0 + (r(., mu) * beta)(t) in the product-integration discretization, whose
/// discrete algebra makes the comparison principle hold exactly on the mesh.
inline std::vector<double> gronwall_envelope(const ContextPtr& ctx, const EnvelopeSpec& spec) {
    if (!(spec.mu > 0.0) || !std::isfinite(spec.mu)) throw DomainError("gronwall_envelope: effective rate must be positive");
    const std::size_t size = ctx->mesh().size();
    RelaxationTable s = solve_s(ctx, spec.mu, SolveMethod::ProductIntegration);
    std::vector<double> env(size);
    if (spec.beta_samples.empty()) {
        for (std::size_t m = 0; m < size; ++m)
            env[m] = s.values[m] * spec.v0 + spec.beta_const / spec.mu * (1.0 - s.values[m]);
    } else {
        std::vector<double> conv = discrete_resolvent_apply(*ctx, spec.mu, spec.beta_samples);
        for (std::size_t m = 0; m < size; ++m) env[m] = s.values[m] * spec.v0 + conv[m];
    }
    return env;
}

inline std::vector<double> gronwall_envelope(const KernelPair& pair, const EnvelopeSpec& spec, const TimeMesh& mesh) {
    return gronwall_envelope(make_context(pair, mesh, 0), spec);
}

/// s(t, mu) v0 sampled with the accurate (hybrid) relaxation table.
inline std::vector<double> decay_envelope(const ContextPtr& ctx, double mu, double v0) {
    if (!(mu > 0.0)) throw DomainError("decay_envelope: rate must be positive");
    RelaxationTable s = solve_s(ctx, mu);
    for (double& x : s.values) x *= v0;
    return s.values;
}

struct GronwallSuiteReport {
    std::size_t cases = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();  // max of v - envelope
    bool pass = false;
};

/// Random nonnegative v with v <= s v0 + r*(a v + beta) built node by node (v = u * RHS, u in [0,1]),
/// compared against gronwall_envelope with rate mu - a.
inline GronwallSuiteReport gronwall_random_suite(const KernelPair& pair, const TimeMesh& mesh, std::size_t cases,
                                                 std::uint64_t seed, double tol = 1e-8) {
    auto ctx = make_context(pair, mesh, 0);
    const ProductWeights& W = ctx->l_weights();
    const std::size_t M = mesh.steps();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GronwallSuiteReport rep;
    rep.cases = cases;
    std::vector<double> v(M + 1), y(M + 1), beta(M + 1);
    for (std::size_t c = 0; c < cases; ++c) {
        const double mu = 1.0 + 19.0 * U(rng);
        const double a = mu * (0.05 + 0.9 * U(rng));
        const double v0 = 2.0 * U(rng);
        const double b0 = 3.0 * U(rng), b1 = 2.0 * U(rng), om = 10.0 * U(rng);
        for (std::size_t m = 0; m <= M; ++m) beta[m] = b0 + b1 * std::pow(std::sin(om * mesh[m]), 2);
        RelaxationTable S = solve_s(ctx, mu, SolveMethod::ProductIntegration);
        v[0] = U(rng) * v0;
        y[0] = a * v[0] + beta[0];
        for (std::size_t m = 1; m <= M; ++m) {
            const double d = W.diag(m), H = W.history(m, y.data()), u = U(rng);
            v[m] = u * (S[m] * v0 + (H + d * beta[m]) / (1.0 + mu * d)) / (1.0 - u * d * a / (1.0 + mu * d));
            const double x = (H + d * (a * v[m] + beta[m])) / (1.0 + mu * d);
            y[m] = a * v[m] + beta[m] - mu * x;
        }
        std::vector<double> env = gronwall_envelope(ctx, EnvelopeSpec{mu - a, v0, 0.0, beta});
        for (std::size_t m = 0; m <= M; ++m) rep.worst_excess = std::max(rep.worst_excess, v[m] - env[m]);
    }
    rep.pass = rep.worst_excess <= tol;
    return rep;
}

struct DecayReport {
    std::size_t violations = 0;
    double max_excess = -std::numeric_limits<double>::infinity();  // max of ||u|| - envelope
    double max_ratio = 0.0;                                        // max of ||u|| / envelope
    double terminal_ratio = 0.0;                                   // ||u(T)|| / ||u(0)||
    bool pass = false;
};

inline DecayReport check_decay(const std::vector<double>& norms, const std::vector<double>& envelope, double tol) {
    if (norms.size() != envelope.size()) throw UsageError("check_decay: envelope does not match the mesh");
    DecayReport rep;
    for (std::size_t m = 0; m < norms.size(); ++m) {
        rep.max_excess = std::max(rep.max_excess, norms[m] - envelope[m]);
        if (envelope[m] > 0.0) rep.max_ratio = std::max(rep.max_ratio, norms[m] / envelope[m]);
        else if (norms[m] > 0.0) rep.max_ratio = std::numeric_limits<double>::infinity();
        if (norms[m] > envelope[m] * (1.0 + tol)) ++rep.violations;
    }
    rep.terminal_ratio = norms.front() > 0.0 ? norms.back() / norms.front() : 0.0;
    rep.pass = rep.violations == 0;
    return rep;
}

inline DecayReport check_decay(const Trajectory& traj, const std::vector<double>& envelope, double tol) {
    return check_decay(traj.norms(), envelope, tol);
}

struct HolderEstimate {
    double gamma_est = 0.0;
    double c_est = 0.0;
};

/// Slope of log sup_t ||u(t+h) - u(t)|| against log h over lags of 1, 2, 4, 8 steps on [delta, T].
inline HolderEstimate estimate_holder_exponent(const Trajectory& traj, double delta) {
    const TimeMesh& mesh = traj.mesh;
    const std::size_t M = mesh.steps();
    if (!(delta > 0.0 && delta < mesh.horizon)) throw UsageError("estimate_holder_exponent: delta must lie in (0, T)");
    std::size_t first = 0;
    while (first <= M && mesh[first] < delta) ++first;
    if (M + 1 - first < 16) throw UsageError("estimate_holder_exponent: need at least 16 nodes in [delta, T]");

    std::vector<double> lx, ly;
    bool any_nonzero = false;
    for (std::size_t lag : {1u, 2u, 4u, 8u}) {
        double sup = 0.0, hmax = 0.0;
        for (std::size_t m = first; m + lag <= M; ++m) {
            sup = std::max(sup, distance(traj.states[m + lag], traj.states[m]));
            hmax = std::max(hmax, mesh[m + lag] - mesh[m]);
        }
        if (sup > 0.0) {
            any_nonzero = true;
            lx.push_back(std::log(hmax));
            ly.push_back(std::log(sup));
        }
    }
    if (!any_nonzero) return {std::numeric_limits<double>::infinity(), 0.0};
    if (lx.size() < 2) return {std::numeric_limits<double>::infinity(), std::exp(ly.front())};
    const double n = double(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    return {slope, std::exp(my - slope * mx)};
}

struct DerivativeBoundReport {
    double M_est = 0.0;       // on the given mesh
    double M_coarse = 0.0;    // on the mesh with half the steps
    double ratio = 0.0;       // M_est / M_coarse
    bool bounded = false;     // ratio <= 2
};

/// max over mu and positive nodes of t mu r(t, mu), the discrete counterpart of t |s'(t, mu)|.
inline DerivativeBoundReport check_derivative_bound(const KernelPair& pair, const std::vector<double>& mu_list, const TimeMesh& mesh) {
    if (mu_list.empty()) throw UsageError("check_derivative_bound: empty mu list");
    for (double mu : mu_list)
        if (!(mu > 0.0)) throw DomainError("check_derivative_bound: mu must be positive");
    auto sup_on = [&](const TimeMesh& ms) {
        auto ctx = make_context(pair, ms);
        double best = 0.0;
        for (double mu : mu_list) {
            RelaxationTable r = solve_r(ctx, mu);
            for (std::size_t m = 1; m < ms.size(); ++m) best = std::max(best, ms[m] * mu * r.values[m]);
        }
        return best;
    };
    DerivativeBoundReport rep;
    rep.M_est = sup_on(mesh);
    rep.M_coarse = sup_on(make_mesh(mesh.horizon, std::max<std::size_t>(2, mesh.steps() / 2), mesh.grading));
    rep.ratio = rep.M_coarse > 0.0 ? rep.M_est / rep.M_coarse : std::numeric_limits<double>::infinity();
    rep.bounded = std::isfinite(rep.M_est) && rep.ratio <= 2.0;
    return rep;
}

/// Default margin: midpoint of (0, lambda1 - rate).
inline double default_theta_margin(double lambda1, double small_data_rate) {
    return 0.5 * (lambda1 - small_data_rate);
}

/// Radius for which (a + b eta^{2 nu}) h_sup <= a h_sup + theta; 1 when the growth term vanishes.
inline double default_eta(double theta, double b, double nu, double h_sup) {
    if (nu == 0.0 || b == 0.0 || h_sup == 0.0) return 1.0;
    return std::pow(theta / (b * h_sup), 1.0 / (2.0 * nu));
}

/// delta = rate * eta / lambda1: initial data with ||u0|| <= delta stay in the small-data regime.
inline double stability_radius(double small_data_rate, double lambda1, double eta) {
    return small_data_rate * eta / lambda1;
}

}  // namespace nonlocal
