#pragma once

// Exact expected functionals E_theta0 F(W(.|X^n)): closed forms for the
// conjugate families and a sufficient-statistic quadrature oracle for the
// exponential likelihood under a Beta prior.

#include "bssd/criteria.hpp"
#include "bssd/errors.hpp"
#include "bssd/functional.hpp"
#include "bssd/models.hpp"
#include "bssd/numerics.hpp"
#include "bssd/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bssd {

enum class ExactMethod { closed_form, suffstat_quadrature };

struct ExactEval {
    FunctionalValue value;
    ExactMethod method = ExactMethod::closed_form;
    double error_estimate = 0.0; ///< relative; zero for closed forms
};

/// Normal likelihood (known sigma0^2) with a N(mu0, tau0^2) prior. The
/// posterior mean theta_n is an affine map of the sample mean, so every
/// functional below has a closed form in theta0 and n.
inline ExactEval exact_g_normal(const Functional& f, const NormalKnownVariance& lik, const NormalPrior& prior,
                                double theta0, double n) {
    validate(LikelihoodFamily{lik});
    validate(Prior{prior});
    validate(f);
    if (!(n >= 1.0) || !std::isfinite(theta0)) {
        throw DomainError("exact_g_normal: need n >= 1 and finite theta0");
    }
    const double shrink = lik.sigma2 / (n * prior.tau2);
    const double post_var = lik.sigma2 / (n + lik.sigma2 / prior.tau2);
    const double post_sd = std::sqrt(post_var);
    const double mean_of_mean = (theta0 + shrink * prior.mu0) / (1.0 + shrink);
    const double var_of_mean = (lik.sigma2 / n) / ((1.0 + shrink) * (1.0 + shrink));

    const FunctionalValue v = std::visit(
        Overloaded{[&](const Variance&) { return FunctionalValue{post_var, {}}; },
                   [&](const Quantile& q) {
                       return FunctionalValue{mean_of_mean + post_sd * std_normal_quantile(q.alpha), {}};
                   },
                   [&](const IntervalLength& q) {
                       return FunctionalValue{post_sd * detail::two_sided_spread(q.alpha), {}};
                   },
                   [&](const Hpd& h) {
                       const double half = post_sd * std_normal_quantile(0.5 + 0.5 * h.level);
                       return FunctionalValue{mean_of_mean - half, mean_of_mean + half};
                   },
                   [&](const CenteredMass& c) {
                       return FunctionalValue{2.0 * std_normal_cdf(c.len / (2.0 * post_sd)) - 1.0, {}};
                   },
                   [&](const ProbAbove& p) {
                       // P(theta_n + sigma_n Z > theta1) with theta_n ~ N(mean_of_mean, var_of_mean).
                       const double spread = std::sqrt(post_var + var_of_mean);
                       return FunctionalValue{std_normal_cdf((mean_of_mean - p.theta1) / spread), {}};
                   }},
        f);
    return {v, ExactMethod::closed_form, 0.0};
}

/// Poisson likelihood, Gamma(a, b) prior: E Var = (b + n theta0) / (a + n)^2.
inline ExactEval exact_apvc_poisson_gamma(double a, double b, double theta0, double n) {
    if (!(a > 0.0 && b > 0.0 && theta0 > 0.0 && n >= 1.0)) {
        throw DomainError("exact_apvc_poisson_gamma: need a, b, theta0 > 0 and n >= 1");
    }
    return {{(b + n * theta0) / ((a + n) * (a + n)), {}}, ExactMethod::closed_form, 0.0};
}

/// Bernoulli likelihood, Uniform(0, 1) prior:
/// E Var = (n^2 t - n t - n(n-1) t^2 + n + 1) / ((n + 2)^2 (n + 3)).
inline ExactEval exact_apvc_binomial_uniform(double theta0, double n) {
    if (!(theta0 > 0.0 && theta0 < 1.0 && n >= 1.0)) {
        throw DomainError("exact_apvc_binomial_uniform: need theta0 in (0, 1) and n >= 1");
    }
    const double t = theta0;
    const double num = n * n * t - n * t - n * (n - 1.0) * t * t + n + 1.0;
    return {{num / ((n + 2.0) * (n + 2.0) * (n + 3.0)), {}}, ExactMethod::closed_form, 0.0};
}

/// Relative quadrature error above which the oracle refuses to answer.
inline constexpr double kOracleTolerance = 1e-5;

/// E_theta0 F(W(.|S_n)) for an exponential likelihood and Beta prior, as a
/// one-dimensional integral over S_n ~ Gamma(n, rate theta0) on
/// [q(1e-8), q(1 - 1e-8)] by composite Simpson (renormalized to the
/// truncated mass). The error estimate compares the rule against the same
/// rule on every other node. `nodes` must be 1 mod 4.
inline std::vector<ExactEval> oracle_expbeta(std::span<const Functional> functionals, const BetaPrior& prior,
                                             double theta0, std::int64_t n, std::size_t nodes = 2001,
                                             std::size_t workers = 1) {
    validate(Prior{prior});
    for (const auto& f : functionals) validate(f);
    if (!(theta0 > 0.0) || !std::isfinite(theta0) || n < 1) {
        throw DomainError("oracle_expbeta: need theta0 > 0 and n >= 1");
    }
    if (nodes < 5 || nodes % 4 != 1) {
        throw DomainError("oracle_expbeta: node budget must be 1 mod 4 and at least 5");
    }
    const double shape = static_cast<double>(n);
    const double s_lo = gamma_quantile(shape, theta0, 1e-8);
    const double s_hi = gamma_quantile(shape, theta0, 1.0 - 1e-8);
    const double h = (s_hi - s_lo) / static_cast<double>(nodes - 1);

    // Sampling density of S_n up to a constant, on the log scale.
    std::vector<double> log_g(nodes);
    std::vector<double> s(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        s[i] = i + 1 == nodes ? s_hi : s_lo + static_cast<double>(i) * h;
        log_g[i] = (shape - 1.0) * std::log(s[i]) - theta0 * s[i];
    }
    const double peak = *std::max_element(log_g.begin(), log_g.end());

    const std::size_t nf = functionals.size();
    // values[i * nf + j]: functional j at node i (lower endpoint); uppers likewise.
    std::vector<double> values(nodes * nf);
    std::vector<double> uppers(nodes * nf, 0.0);
    parallel_for(nodes, workers, [&](std::size_t i) {
        const GridPosterior post = exponential_beta_posterior(prior, SufficientStat{n, s[i]});
        const Posterior wrapped{post};
        for (std::size_t j = 0; j < nf; ++j) {
            const FunctionalValue v = evaluate(wrapped, functionals[j]);
            values[i * nf + j] = v.value;
            if (v.upper) uppers[i * nf + j] = *v.upper;
        }
    });

    auto integrate = [&](std::size_t stride, const std::vector<double>& column_source, std::size_t j) {
        const std::size_t count = (nodes - 1) / stride + 1;
        const auto w = simpson_weights(count, h * static_cast<double>(stride));
        std::vector<double> num(count);
        std::vector<double> den(count);
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t i = k * stride;
            const double g = std::exp(log_g[i] - peak);
            den[k] = w[k] * g;
            num[k] = den[k] * column_source[i * nf + j];
        }
        return pairwise_sum(num) / pairwise_sum(den);
    };

    std::vector<ExactEval> out;
    out.reserve(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        const bool interval = std::holds_alternative<Hpd>(functionals[j]);
        ExactEval e;
        e.method = ExactMethod::suffstat_quadrature;
        auto relative_error = [](double fine, double coarse) {
            return std::abs(fine - coarse) / 15.0 / std::max(std::abs(fine), 1e-300);
        };
        e.value.value = integrate(1, values, j);
        e.error_estimate = relative_error(e.value.value, integrate(2, values, j));
        if (interval) {
            e.value.upper = integrate(1, uppers, j);
            e.error_estimate = std::max(e.error_estimate, relative_error(*e.value.upper, integrate(2, uppers, j)));
        }
        if (!(e.error_estimate <= kOracleTolerance)) {
            throw AccuracyError("oracle_expbeta: quadrature error estimate exceeds tolerance", e.error_estimate);
        }
        out.push_back(e);
    }
    return out;
}

inline ExactEval oracle_expbeta(const Functional& functional, const BetaPrior& prior, double theta0, std::int64_t n,
                                std::size_t nodes = 2001, std::size_t workers = 1) {
    return oracle_expbeta(std::span<const Functional>(&functional, 1), prior, theta0, n, nodes, workers).front();
}

/// Exact value for any (model, functional) pair that has one; nullopt
/// otherwise.
inline std::optional<ExactEval> exact_g(const Model& model, const Functional& f, double theta0, std::int64_t n,
                                        std::size_t workers = 1) {
    validate(model);
    require_in_domain(model.family, theta0);
    const double nn = static_cast<double>(n);
    if (const auto* lik = std::get_if<NormalKnownVariance>(&model.family)) {
        return exact_g_normal(f, *lik, std::get<NormalPrior>(model.prior), theta0, nn);
    }
    if (std::holds_alternative<ExponentialRate>(model.family)) {
        return oracle_expbeta(f, std::get<BetaPrior>(model.prior), theta0, n, 2001, workers);
    }
    if (!std::holds_alternative<Variance>(f)) {
        return std::nullopt;
    }
    if (std::holds_alternative<Poisson>(model.family)) {
        const auto& p = std::get<GammaPrior>(model.prior);
        return exact_apvc_poisson_gamma(p.a, p.b, theta0, nn);
    }
    const auto& p = std::get<BetaPrior>(model.prior);
    if (p.a == 1.0 && p.b == 1.0) {
        return exact_apvc_binomial_uniform(theta0, nn);
    }
    return std::nullopt;
}

} // namespace bssd
