#pragma once

// The four planning criteria: closed-form minimal sample sizes and the
// asymptotic expected functionals G*.

#include "bssd/errors.hpp"
#include "bssd/functional.hpp"
#include "bssd/models.hpp"
#include "bssd/specfun.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>

namespace bssd {

/// E Var(theta | X^n) <= eps.
struct Apvc {
    double eps;
};
/// Expected posterior mass of a length-len interval at the posterior mean
/// is at least 1 - alpha.
struct Acc {
    double len;
    double alpha;
};
/// Expected distance between symmetric posterior quantiles is at most len.
struct Alc {
    double len;
    double alpha;
};
/// Expected posterior mass above theta1 is at least 1 - alpha.
struct EffectSize {
    double theta1;
    double alpha;
};

struct PlanningRange {
    double lo;
    double hi;
};

struct Criterion {
    std::variant<Apvc, Acc, Alc, EffectSize> kind;
    PlanningRange range;
};

struct SampleSizeResult {
    std::int64_t n_min;
    double n_real;
    double inf_info; ///< infimum of I (or of (theta1 - theta)^2 I) over the range
    double inf_theta;
};

namespace detail {

inline void validate_criterion(const Criterion& c) {
    auto probability = [](double a) {
        if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    };
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
    };
    std::visit(Overloaded{[&](const Apvc& k) { positive(k.eps, "eps"); },
                          [&](const Acc& k) {
                              positive(k.len, "len");
                              probability(k.alpha);
                          },
                          [&](const Alc& k) {
                              positive(k.len, "len");
                              probability(k.alpha);
                          },
                          [&](const EffectSize& k) {
                              if (!std::isfinite(k.theta1)) throw DomainError("theta1 must be finite");
                              probability(k.alpha);
                              if (!(k.alpha < 0.5)) throw DomainError("effect size needs alpha < 0.5");
                          }},
               c.kind);
}

inline double two_sided_spread(double alpha) {
    return std_normal_quantile(1.0 - 0.5 * alpha) - std_normal_quantile(0.5 * alpha);
}

} // namespace detail

/// Information infimum the criterion is driven by.
inline InfoInfimum criterion_infimum(const Criterion& c, const LikelihoodFamily& family) {
    detail::validate_criterion(c);
    if (const auto* es = std::get_if<EffectSize>(&c.kind)) {
        return inf_weighted_info(family, c.range.lo, c.range.hi, es->theta1);
    }
    return inf_weighted_info(family, c.range.lo, c.range.hi);
}

/// Whether the criterion holds at sample size n when the information is
/// `info` (the infimum over the planning range). A relative slack of 1e-9
/// absorbs rounding at exact-integer solutions.
inline bool criterion_holds(const Criterion& c, double info, double n) {
    constexpr double slack = 1e-9;
    const double precision = n * info;
    return std::visit(
        Overloaded{[&](const Apvc& k) { return 1.0 / precision <= k.eps * (1.0 + slack); },
                   [&](const Acc& k) {
                       return 2.0 * std_normal_cdf(std::sqrt(precision) * k.len / 2.0) - 1.0 >=
                              (1.0 - k.alpha) * (1.0 - slack);
                   },
                   [&](const Alc& k) {
                       return detail::two_sided_spread(k.alpha) / std::sqrt(precision) <= k.len * (1.0 + slack);
                   },
                   [&](const EffectSize& k) {
                       return std_normal_cdf(-std::sqrt(precision / 2.0)) <= k.alpha * (1.0 + slack);
                   }},
        c.kind);
}

/// Smallest n meeting the criterion uniformly over the planning range.
inline SampleSizeResult min_sample_size(const Criterion& c, const LikelihoodFamily& family) {
    const InfoInfimum inf = criterion_infimum(c, family);
    const double n_real = std::visit(
        Overloaded{[&](const Apvc& k) { return 1.0 / (k.eps * inf.value); },
                   [&](const Acc& k) {
                       const double z = std_normal_quantile(1.0 - 0.5 * k.alpha);
                       return 4.0 / (k.len * k.len * inf.value) * z * z;
                   },
                   [&](const Alc& k) {
                       const double spread = detail::two_sided_spread(k.alpha);
                       return spread * spread / (k.len * k.len * inf.value);
                   },
                   [&](const EffectSize& k) {
                       const double z = std_normal_quantile(k.alpha);
                       return 2.0 * z * z / inf.value;
                   }},
        c.kind);
    if (!std::isfinite(n_real) || n_real > 9.0e15) {
        throw CriterionUnsatisfiable("required sample size is not finite", inf.theta);
    }
    // Exact-integer solutions are kept: the inequalities are non-strict.
    const double nearest = std::round(n_real);
    double n_ceil = std::abs(n_real - nearest) <= 1e-9 * std::max(1.0, n_real) ? nearest : std::ceil(n_real);
    n_ceil = std::max(n_ceil, 1.0);
    return {static_cast<std::int64_t>(n_ceil), n_real, inf.value, inf.theta};
}

// ---------------------------------------------------------------------------
// Asymptotic expected functionals G*

/// Leading-term approximation of E_theta0 F(W(.|X^n)):
///   Variance        1 / (n I)
///   CenteredMass    2 Phi(sqrt(n I) len / 2) - 1
///   IntervalLength  [Phi^{-1}(1 - a/2) - Phi^{-1}(a/2)] / sqrt(n I)
///   Quantile        theta0 + Phi^{-1}(a) / sqrt(n I)
///   ProbAbove       1 - Phi(sqrt(n I / 2) (theta1 - theta0))
///   Hpd             theta0 -/+ Phi^{-1}((1 + level) / 2) / sqrt(n I)
inline FunctionalValue g_star(const Functional& f, const LikelihoodFamily& family, double theta0, double n) {
    validate(f);
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw DomainError("g_star: n must be at least 1");
    }
    const double precision = n * fisher_info(family, theta0);
    const double root = std::sqrt(precision);
    return std::visit(
        Overloaded{[&](const Variance&) { return FunctionalValue{1.0 / precision, {}}; },
                   [&](const CenteredMass& k) {
                       return FunctionalValue{2.0 * std_normal_cdf(root * k.len / 2.0) - 1.0, {}};
                   },
                   [&](const IntervalLength& k) { return FunctionalValue{detail::two_sided_spread(k.alpha) / root, {}}; },
                   [&](const Quantile& k) { return FunctionalValue{theta0 + std_normal_quantile(k.alpha) / root, {}}; },
                   [&](const ProbAbove& k) {
                       return FunctionalValue{1.0 - std_normal_cdf(std::sqrt(precision / 2.0) * (k.theta1 - theta0)), {}};
                   },
                   [&](const Hpd& k) {
                       const double half = std_normal_quantile(0.5 + 0.5 * k.level) / root;
                       return FunctionalValue{theta0 - half, theta0 + half};
                   }},
        f);
}

} // namespace bssd
