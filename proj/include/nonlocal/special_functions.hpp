#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "nonlocal/error.hpp"
#include "nonlocal/quadrature.hpp"

namespace nonlocal {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::floor(x) == x;
}

/// Gamma function; poles are rejected.
inline double gamma_fn(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
    if (is_nonpositive_integer(x)) throw DomainError("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 171.0) return 0.0;
    return 1.0 / std::tgamma(x);
}

/// g_a(t) = t^{a-1}/Gamma(a).
inline double g_power(double a, double t) {
    return std::pow(t, a - 1.0) * rgamma(a);
}

namespace detail {

// e^t E1(t) for t > 1, continued fraction (modified Lentz).
inline double scaled_e1_cf(double t) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = t + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double a = -double(i) * double(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw EvaluationError("exp_integral_e1: continued fraction did not converge", 0.0);
}

// Ein(t) = sum_{k>=1} (-1)^{k+1} t^k / (k k!), for moderate t.
inline double ein_series(double t) {
    long double term = 1.0L;
    long double sum = 0.0L;
    for (int k = 1; k < 500; ++k) {
        term *= -static_cast<long double>(t) / k;  // (-t)^k / k!
        long double add = -term / k;
        sum += add;
        if (std::abs(add) <= 1e-21L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

}  // namespace detail

/// E1(t) = int_t^inf e^{-s}/s ds.
inline double exp_integral_e1(double t) {
    if (!(t > 0.0)) throw DomainError("exp_integral_e1: t must be positive");
    if (t <= 1.0) return -euler_gamma - std::log(t) + detail::ein_series(t);
    if (t > 800.0) return 0.0;
    return std::exp(-t) * detail::scaled_e1_cf(t);
}

/// e^t E1(t), without overflow for large t.
inline double scaled_exp_integral_e1(double t) {
    if (!(t > 0.0)) throw DomainError("scaled_exp_integral_e1: t must be positive");
    if (t <= 1.0) return std::exp(t) * exp_integral_e1(t);
    // e^t E1(t) = (1/t)(1 - 1/t + 2/t^2 - ...); three terms are exact in double beyond 1e8
    if (t > 1e8) return (1.0 - (1.0 - 2.0 / t) / t) / t;
    return detail::scaled_e1_cf(t);
}

/// Ein(t) = E1(t) + ln t + euler_gamma (entire).
inline double ein(double t) {
    if (t <= 2.0) return detail::ein_series(t);
    return exp_integral_e1(t) + std::log(t) + euler_gamma;
}

struct MLParams {
    double alpha;
    double beta;
};

/// Value plus a flag that is false when the argument lies outside the validated range.
struct MLResult {
    double value;
    bool validated;
};

namespace ml_detail {

inline constexpr double z_switch = 10.0;
inline constexpr double validated_max = 50.0;
inline constexpr double asymptotic_accept = 1e-14;

inline void check_params(MLParams p) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw DomainError("mittag_leffler: alpha must lie in (0,1]");
    if (!(p.beta > 0.0)) throw DomainError("mittag_leffler: beta must be positive");
}

}  // namespace ml_detail

/// Power series sum_n (-x)^n / Gamma(alpha n + beta), extended precision. Use for small x.
inline double mittag_leffler_series(MLParams p, double x) {
    long double sum = 0.0L;
    long double xn = 1.0L;
    for (int n = 0; n < 2000; ++n) {
        long double arg = static_cast<long double>(p.alpha) * n + p.beta;
        long double term = xn / std::tgamma(arg);
        sum += term;
        if (n > 2 && std::abs(term) <= 1e-22L * std::abs(sum) && arg > 2.0L) break;
        xn *= -static_cast<long double>(x);
        if (!std::isfinite(static_cast<double>(xn))) break;
    }
    return static_cast<double>(sum);
}

struct AsymptoticSum {
    double value;
    double error_estimate;
};

/// Optimally truncated sum_{k>=1} (-1)^{k-1} x^{-k} / Gamma(beta - alpha k).
/// Truncation follows the envelope x^{-k} Gamma(alpha k + 1 - beta) / pi, which bounds |1/Gamma(beta - alpha k)|
/// up to that factor and is monotone, unlike the raw terms near Gamma poles.
inline AsymptoticSum mittag_leffler_asymptotic(MLParams p, double x) {
    double sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    double logx = std::log(x);
    for (int k = 1; k < 2000; ++k) {
        double y = p.alpha * k + 1.0 - p.beta;
        double log_env = -k * logx + (y > 0.0 ? std::lgamma(y) : 0.0) - std::log(std::numbers::pi);
        double env = std::exp(log_env);
        if (env > best) break;
        best = env;
        // 1/Gamma(z) in log form: x^{-k} underflows long before the series is exhausted for small alpha
        const double z = p.beta - p.alpha * k;
        if (!is_nonpositive_integer(z)) {
            const double sign = z > 0.0 || int(std::floor(-z)) % 2 == 1 ? 1.0 : -1.0;
            const double term = sign * std::exp(-k * logx - std::lgamma(z));
            sum += (k % 2 == 1) ? term : -term;
        }
        if (k > 2 && env < 1e-18 * std::abs(sum)) break;
    }
    return {sum, best};
}

/// Real-integral representation for 0<alpha<1, beta<1+alpha, argument -x with x>0.
inline double mittag_leffler_integral(MLParams p, double x) {
    const double a = p.alpha, b = p.beta;
    if (!(a > 0.0 && a < 1.0) || !(b < 1.0 + a)) throw DomainError("mittag_leffler_integral: parameters out of range");
    const double pi = std::numbers::pi;
    const double s1 = std::sin(pi * (1.0 - b));
    const double s2 = std::sin(pi * (1.0 - b + a));
    const double c = std::cos(pi * a);
    const double pw = (1.0 - b) / a;
    auto f = [&](double chi) {
        if (chi <= 0.0) return 0.0;
        double e = std::exp(-std::pow(chi, 1.0 / a));
        if (e == 0.0) return 0.0;
        double num = chi * s1 + x * s2;
        double den = chi * chi + 2.0 * chi * x * c + x * x;
        return std::pow(chi, pw) * e * num / den;
    };
    // Integrand mass sits at chi = O(1); the denominator peaks near chi = x for alpha near 1.
    double split = std::max(1.0, std::min(x, 64.0));
    double total = quad::tanh_sinh(f, 0.0, 1.0, 1e-15);
    if (split > 1.0) total += quad::tanh_sinh(f, 1.0, split, 1e-15);
    total += quad::exp_sinh(f, split, 1e-15);
    return total / (a * pi);
}

/// E_{alpha,beta}(z) for z <= 0.
inline MLResult mittag_leffler(MLParams p, double z) {
    ml_detail::check_params(p);
    if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("mittag_leffler: z must be finite and nonpositive");
    const double x = -z;
    const bool in_range = x <= ml_detail::validated_max;
    if (x == 0.0) return {rgamma(p.beta), true};

    if (p.alpha == 1.0) {
        if (p.beta == 1.0) return {std::exp(z), true};
        if (x <= 1.0) return {mittag_leffler_series(p, x), true};
        if (p.beta > 1.0) {
            // E_{1,b}(-x) = (1/Gamma(b-1)) int_0^1 e^{-x s} (1-s)^{b-2} ds
            auto f = [&](double s, double sc) {
                double oms = (s > 0.5) ? sc : 1.0 - s;
                return std::exp(-x * s) * std::pow(oms, p.beta - 2.0);
            };
            return {quad::tanh_sinh(f, 0.0, 1.0, 1e-14) * rgamma(p.beta - 1.0), in_range};
        }
        // E_{1,b}(z) = 1/Gamma(b) + z E_{1,b+1}(z)
        MLResult up = mittag_leffler({1.0, p.beta + 1.0}, z);
        return {rgamma(p.beta) + z * up.value, up.validated};
    }

    if (x <= 1.0) return {mittag_leffler_series(p, x), true};

    if (x >= ml_detail::z_switch) {
        AsymptoticSum as = mittag_leffler_asymptotic(p, x);
        if (as.value != 0.0 && as.error_estimate <= ml_detail::asymptotic_accept * std::abs(as.value))
            return {as.value, true};
    }

    if (p.beta >= 1.0 + p.alpha) {
        // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z
        MLResult low = mittag_leffler({p.alpha, p.beta - p.alpha}, z);
        return {(low.value - rgamma(p.beta - p.alpha)) / z, low.validated};
    }
    return {mittag_leffler_integral(p, x), in_range};
}

/// Convenience: value only.
inline double ml_value(double alpha, double beta, double z) {
    return mittag_leffler({alpha, beta}, z).value;
}

}  // namespace nonlocal
