#pragma once

// Posterior functionals F(W(.|X^n)) shared by the asymptotic, exact and
// Monte Carlo evaluators.

#include "bssd/errors.hpp"
#include "bssd/models.hpp"

#include <optional>
#include <string>
#include <variant>

namespace bssd {

/// Posterior variance (APVC).
struct Variance {};
/// Posterior alpha-quantile (Table-1 style ALC column).
struct Quantile {
    double alpha = 0.05;
};
/// Distance between the 1 - alpha/2 and alpha/2 posterior quantiles (ALC).
struct IntervalLength {
    double alpha = 0.05;
};
/// HPD interval endpoints at the given level.
struct Hpd {
    double level = 0.95;
};
/// Posterior mass of [mean - len/2, mean + len/2] (ACC).
struct CenteredMass {
    double len = 0.1;
};
/// Posterior mass above theta1 (ES).
struct ProbAbove {
    double theta1 = 0.0;
};

using Functional = std::variant<Variance, Quantile, IntervalLength, Hpd, CenteredMass, ProbAbove>;

/// Scalar functional value, or an interval when `upper` is set (then
/// `value` is the lower endpoint).
struct FunctionalValue {
    double value = 0.0;
    std::optional<double> upper;

    bool is_interval() const noexcept { return upper.has_value(); }
    double width() const { return upper.value() - value; }
};

inline std::string functional_name(const Functional& f) {
    return std::visit(Overloaded{[](const Variance&) { return std::string("apvc"); },
                                 [](const Quantile&) { return std::string("alc-quantile"); },
                                 [](const IntervalLength&) { return std::string("alc"); },
                                 [](const Hpd&) { return std::string("hpd"); },
                                 [](const CenteredMass&) { return std::string("acc"); },
                                 [](const ProbAbove&) { return std::string("es"); }},
                      f);
}

inline void validate(const Functional& f) {
    auto probability = [](double p, const char* what) {
        if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
    };
    std::visit(Overloaded{[](const Variance&) {},
                          [&](const Quantile& q) { probability(q.alpha, "alpha"); },
                          [&](const IntervalLength& q) { probability(q.alpha, "alpha"); },
                          [&](const Hpd& h) { probability(h.level, "hpd level"); },
                          [](const CenteredMass& c) {
                              if (!(c.len > 0.0) || !std::isfinite(c.len)) throw DomainError("len must be positive");
                          },
                          [](const ProbAbove& p) {
                              if (!std::isfinite(p.theta1)) throw DomainError("theta1 must be finite");
                          }},
               f);
}

inline FunctionalValue evaluate(const Posterior& post, const Functional& f) {
    return std::visit(
        Overloaded{[&](const Variance&) { return FunctionalValue{post_variance(post), {}}; },
                   [&](const Quantile& q) { return FunctionalValue{post_quantile(post, q.alpha), {}}; },
                   [&](const IntervalLength& q) {
                       return FunctionalValue{
                           post_quantile(post, 1.0 - 0.5 * q.alpha) - post_quantile(post, 0.5 * q.alpha), {}};
                   },
                   [&](const Hpd& h) {
                       const HpdInterval iv = post_hpd(post, h.level);
                       return FunctionalValue{iv.lo, iv.hi};
                   },
                   [&](const CenteredMass& c) {
                       const double m = post_mean(post);
                       return FunctionalValue{post_interval_mass(post, m - 0.5 * c.len, m + 0.5 * c.len), {}};
                   },
                   [&](const ProbAbove& p) { return FunctionalValue{post_prob_above(post, p.theta1), {}}; }},
        f);
}

} // namespace bssd
