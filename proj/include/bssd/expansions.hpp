#pragma once

// Leading terms of the expected posterior moments, quantiles, density,
// squared density and CDF derivatives at the true parameter.

#include "bssd/criteria.hpp"
#include "bssd/models.hpp"
#include "bssd/polynomial.hpp"
#include "bssd/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bssd {

struct ExpansionTerm {
    double value;
    double order; ///< power of n carried by the term (a half-integer)
    std::string description;
};

/// I(theta0)^{-r/2} lambda_rr n^{-r/2}. For odd r the coefficient is the
/// formula value; the underlying odd-order term is ambiguous.
inline ExpansionTerm expected_posterior_moment_term(const LikelihoodFamily& family, double theta0, double n,
                                                    unsigned r) {
    const double info = fisher_info(family, theta0);
    const double rr = static_cast<double>(r);
    std::string tag = "expected posterior central moment, leading term";
    if (r % 2 == 1) tag += " (odd r: coefficient ambiguous)";
    // Same rounding as g_star for r = 2: pow(x, 1) is exact.
    return {lambda_rr(r) / std::pow(n * info, 0.5 * rr), -0.5 * rr, tag};
}

inline double expected_posterior_moment(const LikelihoodFamily& family, double theta0, double n, unsigned r) {
    return expected_posterior_moment_term(family, theta0, n, r).value;
}

/// theta0 + Phi^{-1}(alpha) / sqrt(n I(theta0)).
inline double expected_posterior_quantile(const LikelihoodFamily& family, double theta0, double n, double alpha) {
    return g_star(Quantile{alpha}, family, theta0, n).value;
}

namespace detail {

inline void require_dimension(int d) {
    if (d < 1) throw DomainError("dimension must be at least 1");
}

} // namespace detail

/// n^{d/2} |I|^{1/2} / (4 pi)^{d/2}; `info` is the information determinant.
inline double expected_posterior_density(double info, double n, int d = 1) {
    detail::require_dimension(d);
    if (!(info > 0.0)) throw DomainError("information must be positive");
    const double dd = d;
    return std::pow(n, 0.5 * dd) * std::sqrt(info) / std::pow(4.0 * std::numbers::pi, 0.5 * dd);
}

inline double expected_posterior_density(const LikelihoodFamily& family, double theta0, double n) {
    return expected_posterior_density(fisher_info(family, theta0), n, 1);
}

/// n^d |I| / (3^{d/2} (2 pi)^d).
inline double expected_posterior_density_sq(double info, double n, int d = 1) {
    detail::require_dimension(d);
    if (!(info > 0.0)) throw DomainError("information must be positive");
    const double dd = d;
    return std::pow(n, dd) * info / (std::pow(3.0, 0.5 * dd) * std::pow(2.0 * std::numbers::pi, dd));
}

inline double expected_posterior_density_sq(const LikelihoodFamily& family, double theta0, double n) {
    return expected_posterior_density_sq(fisher_info(family, theta0), n, 1);
}

/// Leading term of E d^{r-1}/dtheta^{r-1} w(theta0 | X^n) (r = 1 is the
/// density): n^{r/2} I^{1/2} (4 pi)^{-1/2} E H_{r-1}(Z / sqrt 2).
inline ExpansionTerm expected_cdf_derivative_leading(const LikelihoodFamily& family, double theta0, double n,
                                                     unsigned r) {
    if (r < 1) throw DomainError("derivative order r must be at least 1");
    const double info = fisher_info(family, theta0);
    const double rr = r;
    const double coeff = expect_half_variance(hermite_poly(r - 1, info));
    return {std::pow(n, 0.5 * rr) * std::sqrt(info) / std::sqrt(4.0 * std::numbers::pi) * coeff, 0.5 * rr,
            "expected posterior CDF derivative of order " + std::to_string(r) + ", leading term"};
}

} // namespace bssd
