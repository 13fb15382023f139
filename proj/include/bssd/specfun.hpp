#pragma once

// Special functions: the standard normal CDF and its inverse, log-gamma,
// Gaussian moments, the posterior-moment coefficient lambda_rr, and the
// regularized incomplete gamma and beta functions used by the conjugate
// posteriors.

#include "bssd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bssd {

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument is not finite");
    }
}

} // namespace detail

/// Phi(x), the N(0,1) distribution function.
inline double std_normal_cdf(double x) {
    detail::require_finite(x, "std_normal_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Standard normal density.
inline double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Phi^{-1}(p). Rational initial guess (Acklam) polished by two Halley
/// steps against std_normal_cdf.
inline double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile: p must lie in (0, 1)");
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int step = 0; step < 2; ++step) {
        // Work in whichever tail keeps the residual well conditioned.
        const double e = x < 0.0 ? 0.5 * std::erfc(-x / std::numbers::sqrt2) - p
                                 : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

/// log Gamma(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be positive and finite");
    }
    return std::lgamma(x);
}

/// E Z^k for Z ~ N(0,1): zero for odd k, (k-1)!! for even k.
inline double normal_moment(unsigned k) {
    if (k % 2 == 1) {
        return 0.0;
    }
    double m = 1.0;
    for (unsigned j = k; j > 1; j -= 2) {
        m *= static_cast<double>(j - 1);
    }
    return m;
}

/// 2^{r/2} Gamma((r+1)/2) / Gamma(1/2), the leading coefficient of the
/// expected r-th posterior central moment. Equals (r-1)!! for even r.
inline double lambda_rr(unsigned r) {
    if (r < 1) {
        throw DomainError("lambda_rr: r must be at least 1");
    }
    const double rr = static_cast<double>(r);
    return std::exp(0.5 * rr * std::numbers::ln2 + ln_gamma(0.5 * (rr + 1.0)) - ln_gamma(0.5));
}

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;

// Series for P(a, x), valid for x < a + 1.
inline double lower_gamma_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 100000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta function.
inline double beta_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

} // namespace detail

/// Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw DomainError("gamma_p: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? detail::lower_gamma_series(a, x)
                       : 1.0 - detail::upper_gamma_fraction(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw DomainError("gamma_q: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < a + 1.0 ? 1.0 - detail::lower_gamma_series(a, x)
                       : detail::upper_gamma_fraction(a, x);
}

/// Regularized incomplete beta I_x(a, b).
inline double beta_inc(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw DomainError("beta_inc: need a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_fraction(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_fraction(b, a, 1.0 - x) / b;
}

/// Quantile of Gamma(shape, rate): Wilson-Hilferty start, then safeguarded
/// Newton on gamma_p.
inline double gamma_quantile(double shape, double rate, double p) {
    if (!(shape > 0.0 && rate > 0.0)) {
        throw DomainError("gamma_quantile: shape and rate must be positive");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("gamma_quantile: p must lie in (0, 1)");
    }
    const double z = std_normal_quantile(p);
    const double t = 1.0 / (9.0 * shape);
    double x = shape * std::pow(1.0 - t + z * std::sqrt(t), 3.0);
    if (!(x > 0.0)) {
        x = std::pow(p * std::exp(std::lgamma(shape + 1.0)), 1.0 / shape);
    }
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    const double log_norm = std::lgamma(shape);
    for (int it = 0; it < 200; ++it) {
        const double f = gamma_p(shape, x) - p;
        if (f < 0.0) lo = x; else hi = x;
        const double dens = std::exp((shape - 1.0) * std::log(x) - x - log_norm);
        double next = dens > 0.0 ? x - f / dens : x;
        if (!(next > lo && next < hi)) {
            next = std::isinf(hi) ? 2.0 * x + 1.0 : 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * x) {
            x = next;
            break;
        }
        x = next;
    }
    return x / rate;
}

/// Quantile of Beta(a, b) by bisection polished with Newton on beta_inc.
inline double beta_quantile(double a, double b, double p) {
    if (!(a > 0.0 && b > 0.0)) {
        throw DomainError("beta_quantile: need a, b > 0");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("beta_quantile: p must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = 1.0;
    double x = a / (a + b);
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (int it = 0; it < 300; ++it) {
        const double f = beta_inc(a, b, x) - p;
        if (f < 0.0) lo = x; else hi = x;
        if (hi - lo < 1e-16) break;
        const double dens =
            std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
        double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * std::max(x, 1e-300)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

} // namespace bssd
