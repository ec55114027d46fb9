#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "nonlocal/error.hpp"
#include "nonlocal/laplace_inversion.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/special_functions.hpp"
#include "nonlocal/time_mesh.hpp"

namespace nonlocal {

enum class KernelFamily { Fractional, DistributedOrder, TemperedFractional, TwoTerm };

/// A (k, l) pair with k*l = 1. mu_temper is the tempering rate for TemperedFractional
/// and the weight of the second term for TwoTerm.
struct KernelPair {
    KernelFamily family = KernelFamily::Fractional;
    double alpha = 0.5;
    double beta = 0.0;
    double mu_temper = 0.0;
};

inline std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Fractional: return "fractional";
        case KernelFamily::DistributedOrder: return "distributed_order";
        case KernelFamily::TemperedFractional: return "tempered";
        case KernelFamily::TwoTerm: return "two_term";
    }
    return "unknown";
}

inline KernelFamily parse_family(const std::string& s) {
    if (s == "fractional") return KernelFamily::Fractional;
    if (s == "distributed_order" || s == "distributed") return KernelFamily::DistributedOrder;
    if (s == "tempered" || s == "tempered_fractional") return KernelFamily::TemperedFractional;
    if (s == "two_term") return KernelFamily::TwoTerm;
    throw UsageError("unknown kernel family '" + s + "'");
}

inline void validate(const KernelPair& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw DomainError("kernel: alpha must lie in (0,1)");
    if (!(p.mu_temper >= 0.0) || !std::isfinite(p.mu_temper)) throw DomainError("kernel: mu/gamma must be finite and >= 0");
    if (p.family == KernelFamily::TwoTerm && !(p.alpha < p.beta && p.beta < 1.0))
        throw DomainError("kernel: two-term kernel needs 0 < alpha < beta < 1");
}

inline KernelPair make_fractional(double alpha) {
    KernelPair p{KernelFamily::Fractional, alpha, 0.0, 0.0};
    validate(p);
    return p;
}

/// alpha is unused by this family and kept at a nominal 0.5.
inline KernelPair make_distributed_order() {
    return {KernelFamily::DistributedOrder, 0.5, 0.0, 0.0};
}

inline KernelPair make_tempered(double alpha, double gamma) {
    KernelPair p{KernelFamily::TemperedFractional, alpha, 0.0, gamma};
    validate(p);
    return p;
}

/// k = g_{1-alpha} + mu g_{1-beta}.
inline KernelPair make_two_term(double alpha, double beta, double mu) {
    KernelPair p{KernelFamily::TwoTerm, alpha, beta, mu};
    validate(p);
    return p;
}

namespace kernel_detail {

inline void require_positive(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(what) + ": t must be positive and finite");
}

inline double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

// Tempered pieces with P(t) = int_0^t g_a(s) e^{-g s} ds.
inline double tempered_P(double a, double g, double t) {
    return std::pow(g, -a) * gamma_p(a, g * t);
}
inline double tempered_Q(double a, double g, double t) {
    return t * tempered_P(a, g, t) - a * std::pow(g, -a - 1.0) * gamma_p(a + 1.0, g * t);
}
inline double tempered_R(double a, double g, double t) {
    // int_0^t Q = (1/2) int_0^t (t-s)^2 g_a(s) e^{-g s} ds
    double P = tempered_P(a, g, t);
    double m1 = a * std::pow(g, -a - 1.0) * gamma_p(a + 1.0, g * t);
    double m2 = a * (a + 1.0) * std::pow(g, -a - 2.0) * gamma_p(a + 2.0, g * t);
    return 0.5 * (t * t * P - 2.0 * t * m1 + m2);
}

// Distributed order: L1 and L2 of l = e^t E1(t).
inline double distributed_L1(double t) {
    if (t <= 2.0) {
        double em1 = std::expm1(t);
        return em1 * (-euler_gamma - std::log(t)) + std::exp(t) * ein(t);
    }
    return scaled_exp_integral_e1(t) + std::log(t) + euler_gamma;
}

inline double distributed_L2(double t) {
    if (t <= 2.0) {
        // termwise integration of L1 = -(gamma + ln t)(e^t - 1) + e^t Ein(t)
        const int n_max = 60;
        double ein_c[n_max + 1] = {0.0};
        double fact = 1.0;
        for (int k = 1; k <= n_max; ++k) {
            fact *= k;
            ein_c[k] = ((k % 2) ? 1.0 : -1.0) / (k * fact);
        }
        double lt = std::log(t);
        double sum = 0.0;
        double inv_fact = 1.0;  // 1/n!
        double tp = t;          // t^{n+1}
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) inv_fact /= n;
            double c = 0.0;  // coefficient of t^n in e^t Ein(t)
            double inv_f = 1.0;
            for (int k = n; k >= 1; --k) {
                c += ein_c[k] * inv_f;
                inv_f /= double(n - k + 1);
            }
            double a_n = (n >= 1) ? inv_fact : 0.0;  // coefficient of t^n in e^t - 1
            double np1 = n + 1.0;
            double term = -(euler_gamma + lt) * a_n * tp / np1 + a_n * tp / (np1 * np1) + c * tp / np1;
            sum += term;
            if (n > 8 && std::abs(term) < 1e-18 * std::abs(sum)) break;
            tp *= t;
        }
        return sum;
    }
    return distributed_L1(t) + t * std::log(t) - t + euler_gamma * t;
}

// k(t) = int_0^1 t^{-b}/Gamma(1-b) db, written with (1-b)/Gamma(2-b) to avoid the pole.
// shift = 1, 2 gives the first and second antiderivatives.
template <unsigned N>
struct DistributedKRule {
    std::array<double, N> b{};
    std::array<double, 3 * N> coef{};  // weight times the Gamma factor, per shift

    DistributedKRule() {
        const auto& gl = quad::GaussLegendre<N>::get();
        for (unsigned i = 0; i < N; ++i) {
            b[i] = 0.5 * (gl.x[i] + 1.0);
            double w = 0.5 * gl.w[i];
            coef[i] = w * (1.0 - b[i]) * rgamma(2.0 - b[i]);
            coef[N + i] = w * rgamma(2.0 - b[i]);
            coef[2 * N + i] = w * rgamma(3.0 - b[i]);
        }
    }

    static const DistributedKRule& get() {
        static const DistributedKRule r;
        return r;
    }

    double eval(double t, int shift) const {
        double lt = std::log(t);
        double s = 0.0;
        for (unsigned i = 0; i < N; ++i) s += coef[shift * N + i] * std::exp((double(shift) - b[i]) * lt);
        return s;
    }
};

inline double distributed_k(double t, int shift) {
    double a = DistributedKRule<64>::get().eval(t, shift);
    double b = DistributedKRule<128>::get().eval(t, shift);
    if (std::abs(a - b) <= 1e-8 * std::abs(b)) return b;
    // substitute b = 1 - e^{-u}
    auto f = [&](double u) {
        double e = std::exp(-u);
        double beta = 1.0 - e;
        double v = (shift == 0) ? std::pow(t, -beta) * e * rgamma(1.0 + e)
                                : std::pow(t, double(shift) - beta) * rgamma(double(shift) + e);
        return v * e;
    };
    return quad::exp_sinh(f, 0.0, 1e-12);
}

inline std::complex<double> log_ratio(std::complex<double> z) {
    // ln z / (z - 1), removable singularity at 1
    std::complex<double> w = z - 1.0;
    if (std::abs(w) < 1e-4) return 1.0 - w / 2.0 + w * w / 3.0 - w * w * w / 4.0;
    return std::log(z) / w;
}

}  // namespace kernel_detail

/// Laplace transform of l at complex z (Re z > 0 or on an inversion contour).
inline std::complex<double> laplace_l(const KernelPair& p, std::complex<double> z) {
    switch (p.family) {
        case KernelFamily::Fractional: return std::pow(z, -p.alpha);
        case KernelFamily::DistributedOrder: return kernel_detail::log_ratio(z);
        case KernelFamily::TemperedFractional: return std::pow(z + p.mu_temper, 1.0 - p.alpha) / z;
        case KernelFamily::TwoTerm: return 1.0 / (std::pow(z, p.alpha) + p.mu_temper * std::pow(z, p.beta));
    }
    throw Unsupported("laplace_l: unknown family");
}

/// Laplace transform of l at real lambda > 0.
inline double laplace_l(const KernelPair& p, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("laplace_l: lambda must be positive");
    switch (p.family) {
        case KernelFamily::Fractional: return std::pow(lambda, -p.alpha);
        case KernelFamily::DistributedOrder:
            return kernel_detail::log_ratio(std::complex<double>(lambda, 0.0)).real();
        case KernelFamily::TemperedFractional: return std::pow(lambda + p.mu_temper, 1.0 - p.alpha) / lambda;
        case KernelFamily::TwoTerm: return 1.0 / (std::pow(lambda, p.alpha) + p.mu_temper * std::pow(lambda, p.beta));
    }
    throw Unsupported("laplace_l: unknown family");
}

inline double eval_l(const KernelPair& p, double t) {
    kernel_detail::require_positive(t, "eval_l");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(p.alpha, t);
        case KernelFamily::DistributedOrder: return scaled_exp_integral_e1(t);
        case KernelFamily::TemperedFractional: {
            const double g = p.mu_temper;
            if (g == 0.0) return g_power(p.alpha, t);
            return g_power(p.alpha, t) * std::exp(-g * t) + std::pow(g, 1.0 - p.alpha) * kernel_detail::gamma_p(p.alpha, g * t);
        }
        case KernelFamily::TwoTerm: {
            if (p.mu_temper == 0.0) return g_power(p.alpha, t);
            return invert_laplace([&](std::complex<double> z) { return laplace_l(p, z); }, t);
        }
    }
    throw Unsupported("eval_l: unknown family");
}

/// L1(t) = int_0^t l.
inline double cumulative_l(const KernelPair& p, double t) {
    if (t == 0.0) return 0.0;
    kernel_detail::require_positive(t, "cumulative_l");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(p.alpha + 1.0, t);
        case KernelFamily::DistributedOrder: return kernel_detail::distributed_L1(t);
        case KernelFamily::TemperedFractional: {
            const double g = p.mu_temper;
            if (g == 0.0) return g_power(p.alpha + 1.0, t);
            return kernel_detail::tempered_P(p.alpha, g, t) + g * kernel_detail::tempered_Q(p.alpha, g, t);
        }
        case KernelFamily::TwoTerm: {
            if (p.mu_temper == 0.0) return g_power(p.alpha + 1.0, t);
            return invert_laplace([&](std::complex<double> z) { return laplace_l(p, z) / z; }, t);
        }
    }
    throw Unsupported("cumulative_l: unknown family");
}

/// L2(t) = int_0^t L1.
inline double cumulative_l2(const KernelPair& p, double t) {
    if (t == 0.0) return 0.0;
    kernel_detail::require_positive(t, "cumulative_l2");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(p.alpha + 2.0, t);
        case KernelFamily::DistributedOrder: return kernel_detail::distributed_L2(t);
        case KernelFamily::TemperedFractional: {
            const double g = p.mu_temper;
            if (g == 0.0) return g_power(p.alpha + 2.0, t);
            return kernel_detail::tempered_Q(p.alpha, g, t) + g * kernel_detail::tempered_R(p.alpha, g, t);
        }
        case KernelFamily::TwoTerm: {
            if (p.mu_temper == 0.0) return g_power(p.alpha + 2.0, t);
            return invert_laplace([&](std::complex<double> z) { return laplace_l(p, z) / (z * z); }, t);
        }
    }
    throw Unsupported("cumulative_l2: unknown family");
}

inline double eval_k(const KernelPair& p, double t) {
    kernel_detail::require_positive(t, "eval_k");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(1.0 - p.alpha, t);
        case KernelFamily::DistributedOrder: return kernel_detail::distributed_k(t, 0);
        case KernelFamily::TemperedFractional: return g_power(1.0 - p.alpha, t) * std::exp(-p.mu_temper * t);
        case KernelFamily::TwoTerm: return g_power(1.0 - p.alpha, t) + p.mu_temper * g_power(1.0 - p.beta, t);
    }
    throw Unsupported("eval_k: unknown family");
}

/// K1(t) = int_0^t k.
inline double cumulative_k(const KernelPair& p, double t) {
    if (t == 0.0) return 0.0;
    kernel_detail::require_positive(t, "cumulative_k");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(2.0 - p.alpha, t);
        case KernelFamily::DistributedOrder: return kernel_detail::distributed_k(t, 1);
        case KernelFamily::TemperedFractional: {
            const double g = p.mu_temper;
            if (g == 0.0) return g_power(2.0 - p.alpha, t);
            return kernel_detail::tempered_P(1.0 - p.alpha, g, t);
        }
        case KernelFamily::TwoTerm: return g_power(2.0 - p.alpha, t) + p.mu_temper * g_power(2.0 - p.beta, t);
    }
    throw Unsupported("cumulative_k: unknown family");
}

/// K2(t) = int_0^t K1.
inline double cumulative_k2(const KernelPair& p, double t) {
    if (t == 0.0) return 0.0;
    kernel_detail::require_positive(t, "cumulative_k2");
    switch (p.family) {
        case KernelFamily::Fractional: return g_power(3.0 - p.alpha, t);
        case KernelFamily::DistributedOrder: return kernel_detail::distributed_k(t, 2);
        case KernelFamily::TemperedFractional: {
            const double g = p.mu_temper;
            if (g == 0.0) return g_power(3.0 - p.alpha, t);
            return kernel_detail::tempered_Q(1.0 - p.alpha, g, t);
        }
        case KernelFamily::TwoTerm: return g_power(3.0 - p.alpha, t) + p.mu_temper * g_power(3.0 - p.beta, t);
    }
    throw Unsupported("cumulative_k2: unknown family");
}

struct PcIdentityReport {
    double max_residual = 0.0;
    bool pass = false;
};

/// max_m |(k*l)(t_m) - 1| over the positive mesh nodes, both endpoint singularities subtracted.
inline PcIdentityReport verify_pc_identity(const KernelPair& p, const TimeMesh& mesh, double tol) {
    PcIdentityReport rep;
    for (std::size_t m = 1; m < mesh.size(); ++m) {
        const double t = mesh[m];
        double v = quad::singular_convolution([&](double x) { return eval_k(p, x); },
                                              [&](double x) { return cumulative_k(p, x); },
                                              [&](double x) { return eval_l(p, x); },
                                              [&](double x) { return cumulative_l(p, x); }, t);
        rep.max_residual = std::max(rep.max_residual, std::abs(v - 1.0));
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

struct RegularityReport {
    double c1 = 0.0;
    double c2 = 0.0;
    bool pass = false;
};

/// Bounds |lambda l^'| <= c1 |l^| and |lambda^2 l^''| <= c2 |l^| for l^ = 1/(lambda^a + mu lambda^b).
inline RegularityReport check_2_regular(const KernelPair& p, const std::vector<double>& lambda_grid) {
    if (p.family != KernelFamily::TwoTerm) throw Unsupported("check_2_regular: only the two-term kernel is supported");
    if (lambda_grid.empty()) throw UsageError("check_2_regular: empty lambda grid");
    const double a = p.alpha, b = p.beta, mu = p.mu_temper;
    RegularityReport rep;
    for (double lam : lambda_grid) {
        if (!(lam > 0.0)) throw DomainError("check_2_regular: lambda must be positive");
        double la = std::pow(lam, a), lb = mu * std::pow(lam, b);
        double D = la + lb;
        double d1 = a * la + b * lb;                          // lambda D'
        double d2 = a * (a - 1.0) * la + b * (b - 1.0) * lb;  // lambda^2 D''
        double r1 = std::abs(d1 / D);                         // |lambda l^'| / l^
        double r2 = std::abs(2.0 * (d1 / D) * (d1 / D) - d2 / D);
        rep.c1 = std::max(rep.c1, r1);
        rep.c2 = std::max(rep.c2, r2);
    }
    rep.pass = rep.c1 <= 1.0 + 1e-12 && rep.c2 <= 3.0 + 1e-12;
    return rep;
}

}  // namespace nonlocal
