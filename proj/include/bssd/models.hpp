#pragma once

// Likelihood families, priors, sufficient statistics and posteriors.
//
// Datasets are carried only through their sufficient statistic (n, s). The
// conjugate pairs give closed-form posteriors; the exponential likelihood
// with a Beta prior is handled on a uniform grid.

#include "bssd/errors.hpp"
#include "bssd/grid_posterior.hpp"
#include "bssd/rng.hpp"
#include "bssd/specfun.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

namespace bssd {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Likelihood families

/// X ~ N(theta, sigma2) with sigma2 known.
struct NormalKnownVariance {
    double sigma2 = 1.0;
};
/// X ~ Poisson(theta), theta > 0.
struct Poisson {};
/// X ~ Bernoulli(theta), theta in (0, 1).
struct Bernoulli {};
/// X ~ Exponential with density theta exp(-theta x), theta > 0.
struct ExponentialRate {};

using LikelihoodFamily = std::variant<NormalKnownVariance, Poisson, Bernoulli, ExponentialRate>;

inline std::string family_name(const LikelihoodFamily& family) {
    return std::visit(Overloaded{[](const NormalKnownVariance&) { return std::string("normal"); },
                                 [](const Poisson&) { return std::string("poisson"); },
                                 [](const Bernoulli&) { return std::string("bernoulli"); },
                                 [](const ExponentialRate&) { return std::string("exp"); }},
                      family);
}

inline void validate(const LikelihoodFamily& family) {
    if (const auto* nk = std::get_if<NormalKnownVariance>(&family)) {
        if (!(nk->sigma2 > 0.0) || !std::isfinite(nk->sigma2)) {
            throw DomainError("normal likelihood: sigma2 must be positive");
        }
    }
}

/// Open parameter domain (lower, upper) of a family.
struct ParameterDomain {
    double lower;
    double upper;
    bool contains(double theta) const noexcept { return theta > lower && theta < upper; }
};

inline ParameterDomain parameter_domain(const LikelihoodFamily& family) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(Overloaded{[&](const NormalKnownVariance&) { return ParameterDomain{-inf, inf}; },
                                 [&](const Poisson&) { return ParameterDomain{0.0, inf}; },
                                 [&](const Bernoulli&) { return ParameterDomain{0.0, 1.0}; },
                                 [&](const ExponentialRate&) { return ParameterDomain{0.0, inf}; }},
                      family);
}

inline void require_in_domain(const LikelihoodFamily& family, double theta) {
    if (!std::isfinite(theta) || !parameter_domain(family).contains(theta)) {
        throw DomainError(family_name(family) + ": theta=" + std::to_string(theta) +
                          " is outside the parameter domain");
    }
}

/// Per-observation Fisher information I(theta).
inline double fisher_info(const LikelihoodFamily& family, double theta) {
    validate(family);
    require_in_domain(family, theta);
    return std::visit(Overloaded{[&](const NormalKnownVariance& f) { return 1.0 / f.sigma2; },
                                 [&](const Poisson&) { return 1.0 / theta; },
                                 [&](const Bernoulli&) { return 1.0 / (theta * (1.0 - theta)); },
                                 [&](const ExponentialRate&) { return 1.0 / (theta * theta); }},
                      family);
}

/// Infimum of I(theta), or of (theta1 - theta)^2 I(theta), over a range.
struct InfoInfimum {
    double value;
    double theta; ///< where the infimum is attained
};

/// Uniform 10,001-node scan (endpoints included) followed by golden-section
/// refinement inside the bracket of the best node.
inline InfoInfimum inf_weighted_info(const LikelihoodFamily& family, double lo, double hi,
                                     std::optional<double> theta1 = std::nullopt) {
    validate(family);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("planning range must satisfy lo < hi");
    }
    require_in_domain(family, lo);
    require_in_domain(family, hi);
    if (theta1 && !std::isfinite(*theta1)) {
        throw DomainError("theta1 must be finite");
    }
    auto objective = [&](double theta) {
        const double info = fisher_info(family, theta);
        if (!theta1) {
            return info;
        }
        const double gap = *theta1 - theta;
        return gap * gap * info;
    };

    constexpr std::size_t nodes = 10'001;
    const double step = (hi - lo) / static_cast<double>(nodes - 1);
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    double largest = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double theta = k + 1 == nodes ? hi : lo + static_cast<double>(k) * step;
        const double v = objective(theta);
        largest = std::max(largest, v);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    double a = best == 0 ? lo : lo + static_cast<double>(best - 1) * step;
    double b = best + 1 >= nodes ? hi : lo + static_cast<double>(best + 1) * step;
    double best_theta = best + 1 == nodes ? hi : lo + static_cast<double>(best) * step;

    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
        }
    }
    for (const auto& [theta, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (v < best_value) {
            best_value = v;
            best_theta = theta;
        }
    }

    if (!std::isfinite(best_value) || !(best_value > 1e-12 * largest)) {
        throw CriterionUnsatisfiable("information infimum is zero near theta=" +
                                         std::to_string(best_theta),
                                     best_theta);
    }
    return {best_value, best_theta};
}

// ---------------------------------------------------------------------------
// Priors

struct NormalPrior {
    double mu0 = 0.0;
    double tau2 = 1.0;
};

/// Gamma prior in the (a, b) parameterization whose Poisson update is
/// G(a + n, b + S_n): a accumulates the sample size (it acts as the rate)
/// and b accumulates the counts (it acts as the shape). Prior mean b / a.
struct GammaPrior {
    double a = 1.0;
    double b = 1.0;
};

/// Beta(a, b); Uniform(0, 1) is Beta(1, 1).
struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

using Prior = std::variant<NormalPrior, GammaPrior, BetaPrior>;

inline void validate(const Prior& prior) {
    std::visit(Overloaded{[](const NormalPrior& p) {
                              if (!std::isfinite(p.mu0) || !(p.tau2 > 0.0) || !std::isfinite(p.tau2)) {
                                  throw DomainError("normal prior: tau2 must be positive");
                              }
                          },
                          [](const GammaPrior& p) {
                              if (!(p.a > 0.0 && p.b > 0.0) || !std::isfinite(p.a + p.b)) {
                                  throw DomainError("gamma prior: a and b must be positive");
                              }
                          },
                          [](const BetaPrior& p) {
                              if (!(p.a > 0.0 && p.b > 0.0) || !std::isfinite(p.a + p.b)) {
                                  throw DomainError("beta prior: a and b must be positive");
                              }
                          }},
               prior);
}

/// A likelihood paired with a compatible prior.
struct Model {
    LikelihoodFamily family;
    Prior prior;
};

inline bool supported_pair(const LikelihoodFamily& family, const Prior& prior) {
    return (std::holds_alternative<NormalKnownVariance>(family) && std::holds_alternative<NormalPrior>(prior)) ||
           (std::holds_alternative<Poisson>(family) && std::holds_alternative<GammaPrior>(prior)) ||
           (std::holds_alternative<Bernoulli>(family) && std::holds_alternative<BetaPrior>(prior)) ||
           (std::holds_alternative<ExponentialRate>(family) && std::holds_alternative<BetaPrior>(prior));
}

inline void validate(const Model& model) {
    validate(model.family);
    validate(model.prior);
    if (!supported_pair(model.family, model.prior)) {
        throw ConfigurationError("unsupported likelihood/prior pair for family " +
                                 family_name(model.family));
    }
}

// ---------------------------------------------------------------------------
// Sufficient statistics

/// n observations summarized by s: the sample mean (normal), the sum of
/// counts (Poisson, Bernoulli) or the sum of observations (exponential).
struct SufficientStat {
    std::int64_t n = 1;
    double s = 0.0;
};

inline void validate(const LikelihoodFamily& family, const SufficientStat& stat) {
    if (stat.n < 1) {
        throw DomainError("sufficient statistic: n must be positive");
    }
    if (!std::isfinite(stat.s)) {
        throw DomainError("sufficient statistic: s must be finite");
    }
    const bool integral = stat.s >= 0.0 && std::floor(stat.s) == stat.s;
    std::visit(Overloaded{[](const NormalKnownVariance&) {},
                          [&](const Poisson&) {
                              if (!integral) throw DomainError("poisson statistic must be a nonnegative integer");
                          },
                          [&](const Bernoulli&) {
                              if (!integral || stat.s > static_cast<double>(stat.n)) {
                                  throw DomainError("bernoulli statistic must be an integer in [0, n]");
                              }
                          },
                          [&](const ExponentialRate&) {
                              if (!(stat.s > 0.0)) throw DomainError("exponential statistic must be positive");
                          }},
               family);
}

/// Draws the sufficient statistic of n observations under theta0.
inline SufficientStat sample_suffstat(const LikelihoodFamily& family, double theta0, std::int64_t n,
                                      SeededGenerator& rng) {
    validate(family);
    require_in_domain(family, theta0);
    if (n < 1) {
        throw DomainError("sample_suffstat: n must be positive");
    }
    SufficientStat stat{n, 0.0};
    std::visit(Overloaded{[&](const NormalKnownVariance& f) {
                              const double sd = std::sqrt(f.sigma2);
                              double sum = 0.0;
                              for (std::int64_t i = 0; i < n; ++i) sum += theta0 + sd * normal_deviate(rng);
                              stat.s = sum / static_cast<double>(n);
                          },
                          [&](const Poisson&) {
                              std::int64_t sum = 0;
                              for (std::int64_t i = 0; i < n; ++i) sum += poisson_deviate(rng, theta0);
                              stat.s = static_cast<double>(sum);
                          },
                          [&](const Bernoulli&) {
                              std::int64_t sum = 0;
                              for (std::int64_t i = 0; i < n; ++i) sum += bernoulli_deviate(rng, theta0);
                              stat.s = static_cast<double>(sum);
                          },
                          [&](const ExponentialRate&) {
                              double sum = 0.0;
                              for (std::int64_t i = 0; i < n; ++i) sum += exponential_deviate(rng, theta0);
                              stat.s = sum;
                          }},
               family);
    return stat;
}

// ---------------------------------------------------------------------------
// Posteriors

struct NormalPosterior {
    double mean;
    double variance;
};

struct GammaPosterior {
    double shape;
    double rate;
};

struct BetaPosterior {
    double a;
    double b;
};

using Posterior = std::variant<NormalPosterior, GammaPosterior, BetaPosterior, GridPosterior>;

/// Node count of the grid used for non-conjugate posteriors.
inline constexpr std::size_t kPosteriorGridNodes = 4096;

/// Grid posterior for an exponential likelihood under a Beta(a, b) prior:
/// log density (a - 1 + n) log t + (b - 1) log(1 - t) - t S on the nodes
/// k / K, k = 1..K.
inline GridPosterior exponential_beta_posterior(const BetaPrior& prior, const SufficientStat& stat,
                                                std::size_t nodes = kPosteriorGridNodes) {
    if (prior.a < 1.0 || prior.b < 1.0) {
        throw ConfigurationError("exponential/beta grid posterior needs prior a, b >= 1");
    }
    const double k = static_cast<double>(nodes);
    const double power = prior.a - 1.0 + static_cast<double>(stat.n);
    const double tail = prior.b - 1.0;
    std::vector<double> log_density(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double t = static_cast<double>(i + 1) / k;
        const double edge = tail == 0.0 ? 0.0 : tail * std::log1p(-t);
        log_density[i] = power * std::log(t) + edge - t * stat.s;
    }
    return GridPosterior::from_log_density(1.0 / k, 1.0, log_density);
}

inline Posterior posterior(const LikelihoodFamily& family, const Prior& prior, const SufficientStat& stat) {
    validate(Model{family, prior});
    validate(family, stat);
    const double n = static_cast<double>(stat.n);
    if (const auto* f = std::get_if<NormalKnownVariance>(&family)) {
        const auto& p = std::get<NormalPrior>(prior);
        const double shrink = f->sigma2 / (n * p.tau2);
        return NormalPosterior{(stat.s + shrink * p.mu0) / (1.0 + shrink),
                               f->sigma2 * p.tau2 / (n * p.tau2 + f->sigma2)};
    }
    if (std::holds_alternative<Poisson>(family)) {
        const auto& p = std::get<GammaPrior>(prior);
        return GammaPosterior{p.b + stat.s, p.a + n};
    }
    const auto& p = std::get<BetaPrior>(prior);
    if (std::holds_alternative<Bernoulli>(family)) {
        return BetaPosterior{p.a + stat.s, p.b + n - stat.s};
    }
    return exponential_beta_posterior(p, stat);
}

inline Posterior posterior(const Model& model, const SufficientStat& stat) {
    return posterior(model.family, model.prior, stat);
}

inline double post_mean(const Posterior& post) {
    return std::visit(Overloaded{[](const NormalPosterior& p) { return p.mean; },
                                 [](const GammaPosterior& p) { return p.shape / p.rate; },
                                 [](const BetaPosterior& p) { return p.a / (p.a + p.b); },
                                 [](const GridPosterior& p) { return p.mean(); }},
                      post);
}

inline double post_variance(const Posterior& post) {
    return std::visit(Overloaded{[](const NormalPosterior& p) { return p.variance; },
                                 [](const GammaPosterior& p) { return p.shape / (p.rate * p.rate); },
                                 [](const BetaPosterior& p) {
                                     const double s = p.a + p.b;
                                     return p.a * p.b / (s * s * (s + 1.0));
                                 },
                                 [](const GridPosterior& p) { return p.variance(); }},
                      post);
}

/// Posterior distribution function.
inline double post_cdf(const Posterior& post, double x) {
    if (std::isnan(x)) {
        throw DomainError("post_cdf: argument is NaN");
    }
    return std::visit(
        Overloaded{[&](const NormalPosterior& p) {
                       if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
                       return std_normal_cdf((x - p.mean) / std::sqrt(p.variance));
                   },
                   [&](const GammaPosterior& p) { return x <= 0.0 ? 0.0 : gamma_p(p.shape, p.rate * x); },
                   [&](const BetaPosterior& p) { return beta_inc(p.a, p.b, x); },
                   [&](const GridPosterior& p) { return p.cdf(x); }},
        post);
}

inline double post_quantile(const Posterior& post, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("post_quantile: alpha must lie in (0, 1)");
    }
    return std::visit(
        Overloaded{[&](const NormalPosterior& p) { return p.mean + std::sqrt(p.variance) * std_normal_quantile(alpha); },
                   [&](const GammaPosterior& p) { return gamma_quantile(p.shape, p.rate, alpha); },
                   [&](const BetaPosterior& p) { return beta_quantile(p.a, p.b, alpha); },
                   [&](const GridPosterior& p) { return p.quantile(alpha); }},
        post);
}

/// Posterior probability of [lo, hi].
inline double post_interval_mass(const Posterior& post, double lo, double hi) {
    if (!(lo <= hi)) {
        throw DomainError("post_interval_mass: need lo <= hi");
    }
    if (lo == hi) {
        return 0.0;
    }
    if (const auto* p = std::get_if<NormalPosterior>(&post)) {
        const double sd = std::sqrt(p->variance);
        const double zl = std::isinf(lo) ? -std::numeric_limits<double>::infinity() : (lo - p->mean) / sd;
        const double zh = std::isinf(hi) ? std::numeric_limits<double>::infinity() : (hi - p->mean) / sd;
        // Difference taken in the tail that avoids cancellation.
        auto cdf = [](double z) { return std::isinf(z) ? (z > 0 ? 1.0 : 0.0) : std_normal_cdf(z); };
        if (zl > 0.0) {
            return cdf(-zl) - cdf(-zh);
        }
        return cdf(zh) - cdf(zl);
    }
    return post_cdf(post, hi) - post_cdf(post, lo);
}

/// Posterior probability of (theta1, infinity).
inline double post_prob_above(const Posterior& post, double theta1) {
    if (std::isnan(theta1)) {
        throw DomainError("post_prob_above: theta1 is NaN");
    }
    return std::visit(
        Overloaded{[&](const NormalPosterior& p) {
                       if (std::isinf(theta1)) return theta1 > 0 ? 0.0 : 1.0;
                       return std_normal_cdf((p.mean - theta1) / std::sqrt(p.variance));
                   },
                   [&](const GammaPosterior& p) { return theta1 <= 0.0 ? 1.0 : gamma_q(p.shape, p.rate * theta1); },
                   [&](const BetaPosterior& p) {
                       if (theta1 <= 0.0) return 1.0;
                       if (theta1 >= 1.0) return 0.0;
                       return beta_inc(p.b, p.a, 1.0 - theta1);
                   },
                   [&](const GridPosterior& p) { return 1.0 - p.cdf(theta1); }},
        post);
}

/// Converts a closed-form Gamma or Beta posterior to a grid spanning its
/// central 1 - 2e-10 mass.
inline GridPosterior to_grid(const Posterior& post, std::size_t nodes = kPosteriorGridNodes) {
    constexpr double tail = 1e-10;
    return std::visit(
        Overloaded{[&](const NormalPosterior& p) {
                       const double sd = std::sqrt(p.variance);
                       return GridPosterior::tabulate(p.mean - 12.0 * sd, p.mean + 12.0 * sd, nodes, [&](double t) {
                           const double z = (t - p.mean) / sd;
                           return -0.5 * z * z;
                       });
                   },
                   [&](const GammaPosterior& p) {
                       const double lo = gamma_quantile(p.shape, p.rate, tail);
                       const double hi = gamma_quantile(p.shape, p.rate, 1.0 - tail);
                       return GridPosterior::tabulate(lo, hi, nodes, [&](double t) {
                           return (p.shape - 1.0) * std::log(t) - p.rate * t;
                       });
                   },
                   [&](const BetaPosterior& p) {
                       const double lo = beta_quantile(p.a, p.b, tail);
                       const double hi = beta_quantile(p.a, p.b, 1.0 - tail);
                       return GridPosterior::tabulate(lo, hi, nodes, [&](double t) {
                           return (p.a - 1.0) * std::log(t) + (p.b - 1.0) * std::log1p(-t);
                       });
                   },
                   [&](const GridPosterior& p) { return p; }},
        post);
}

/// Highest posterior density interval. Symmetric closed forms use the
/// equal-tailed interval; everything else goes through the grid.
inline HpdInterval post_hpd(const Posterior& post, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("post_hpd: level must lie in (0, 1)");
    }
    if (const auto* p = std::get_if<NormalPosterior>(&post)) {
        const double half = std::sqrt(p->variance) * std_normal_quantile(0.5 + 0.5 * level);
        return {p->mean - half, p->mean + half, level};
    }
    if (const auto* p = std::get_if<BetaPosterior>(&post); p && p->a == p->b) {
        const double lo = beta_quantile(p->a, p->b, 0.5 - 0.5 * level);
        return {lo, 1.0 - lo, level};
    }
    if (const auto* p = std::get_if<GridPosterior>(&post)) {
        return p->hpd(level);
    }
    return to_grid(post).hpd(level);
}

} // namespace bssd
