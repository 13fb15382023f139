#include "bssd/exact.hpp"
#include "bssd/functional.hpp"
#include "bssd/models.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace bssd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridPosterior tabulated_beta(double a, double b, std::size_t nodes = kPosteriorGridNodes) {
    return GridPosterior::tabulate(0.0, 1.0, nodes, [&](double t) {
        return (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t);
    });
}

} // namespace

TEST(FisherInfo, Families) {
    EXPECT_DOUBLE_EQ(fisher_info(NormalKnownVariance{0.2}, 0.7), 5.0);
    EXPECT_DOUBLE_EQ(fisher_info(NormalKnownVariance{0.2}, -40.0), 5.0);
    EXPECT_DOUBLE_EQ(fisher_info(Bernoulli{}, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(fisher_info(ExponentialRate{}, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(fisher_info(Poisson{}, 0.25), 4.0);
}

TEST(FisherInfo, DomainErrors) {
    EXPECT_THROW(fisher_info(Bernoulli{}, 1.0), DomainError);
    EXPECT_THROW(fisher_info(Bernoulli{}, 0.0), DomainError);
    EXPECT_THROW(fisher_info(Poisson{}, -1.0), DomainError);
    EXPECT_THROW(fisher_info(ExponentialRate{}, 0.0), DomainError);
    EXPECT_THROW(fisher_info(NormalKnownVariance{0.0}, 1.0), DomainError);
    EXPECT_THROW(fisher_info(NormalKnownVariance{1.0}, std::nan("")), DomainError);
}

TEST(InfWeightedInfo, Examples) {
    EXPECT_NEAR(inf_weighted_info(NormalKnownVariance{0.2}, 0.1, 0.9).value, 5.0, 1e-12);
    const auto bern = inf_weighted_info(Bernoulli{}, 0.4, 0.6);
    EXPECT_NEAR(bern.value, 4.0, 1e-12);
    EXPECT_NEAR(bern.theta, 0.5, 1e-6);
    const auto es = inf_weighted_info(NormalKnownVariance{0.2}, 0.4, 0.6, 0.3);
    EXPECT_NEAR(es.value, 0.05, 1e-12);
    EXPECT_NEAR(es.theta, 0.4, 1e-9);
}

TEST(InfWeightedInfo, EndpointMinima) {
    // Poisson 1/theta decreases, so the infimum sits at the right end.
    EXPECT_NEAR(inf_weighted_info(Poisson{}, 0.5, 2.0).value, 0.5, 1e-12);
    // Bernoulli with theta1 = 0.9 over [0.1, 0.8]: (0.9 - t)^2 / (t (1 - t)),
    // minimized at the right endpoint 0.8 -> 0.01 / 0.16.
    EXPECT_NEAR(inf_weighted_info(Bernoulli{}, 0.1, 0.8, 0.9).value, 0.0625, 1e-9);
}

TEST(InfWeightedInfo, InteriorMinimum) {
    // An off-center Bernoulli range still bottoms out at 0.5. For the
    // exponential family with theta1 = 1, (1 - t)^2 / t^2 over [0.2, 0.9] is
    // smallest at 0.9.
    const auto bern = inf_weighted_info(Bernoulli{}, 0.2, 0.95);
    EXPECT_NEAR(bern.value, 4.0, 1e-12);
    EXPECT_NEAR(bern.theta, 0.5, 1e-6);
    EXPECT_NEAR(inf_weighted_info(ExponentialRate{}, 0.2, 0.9, 1.0).value, 1.0 / 81.0, 1e-12);
}

TEST(InfWeightedInfo, ZeroInfimumIsUnsatisfiable) {
    try {
        inf_weighted_info(NormalKnownVariance{0.2}, 0.4, 0.6, 0.5);
        FAIL() << "expected CriterionUnsatisfiable";
    } catch (const CriterionUnsatisfiable& e) {
        EXPECT_NEAR(e.theta(), 0.5, 1e-6);
    }
}

TEST(InfWeightedInfo, RangeChecks) {
    EXPECT_THROW(inf_weighted_info(Bernoulli{}, 0.6, 0.4), DomainError);
    EXPECT_THROW(inf_weighted_info(Bernoulli{}, 0.0, 0.4), DomainError);
    EXPECT_THROW(inf_weighted_info(Poisson{}, -1.0, 2.0), DomainError);
}

TEST(SampleSuffstat, NearDegenerateBernoulli) {
    SeededGenerator rng(11);
    EXPECT_EQ(sample_suffstat(Bernoulli{}, 1.0 - 1e-15, 10, rng).s, 10.0);
}

TEST(SampleSuffstat, ExponentialClt) {
    SeededGenerator rng(20060301, 5);
    const auto stat = sample_suffstat(ExponentialRate{}, 0.5, 10'000, rng);
    EXPECT_EQ(stat.n, 10'000);
    EXPECT_NEAR(stat.s / 1e4, 2.0, 3.0 * 2.0 / 100.0);
}

TEST(SampleSuffstat, PoissonClt) {
    SeededGenerator rng(20060301, 6);
    const auto stat = sample_suffstat(Poisson{}, 1.6, 10'000, rng);
    EXPECT_EQ(stat.s, std::floor(stat.s));
    EXPECT_NEAR(stat.s / 1e4, 1.6, 3.0 * std::sqrt(1.6 / 1e4));
}

TEST(SampleSuffstat, Deterministic) {
    SeededGenerator a(3, 9);
    SeededGenerator b(3, 9);
    EXPECT_EQ(sample_suffstat(NormalKnownVariance{2.0}, 1.0, 50, a).s,
              sample_suffstat(NormalKnownVariance{2.0}, 1.0, 50, b).s);
}

TEST(Posterior, PoissonGamma) {
    // Paper notation G(a + n, b + S): here G(12.5, 8.5), i.e. rate 12.5 and
    // shape 8.5.
    const auto post = posterior(Poisson{}, GammaPrior{2.5, 3.5}, {10, 5.0});
    const auto& g = std::get<GammaPosterior>(post);
    EXPECT_DOUBLE_EQ(g.rate, 12.5);
    EXPECT_DOUBLE_EQ(g.shape, 8.5);
}

TEST(Posterior, BernoulliBeta) {
    const auto post = posterior(Bernoulli{}, BetaPrior{1.0, 1.0}, {100, 50.0});
    const auto& b = std::get<BetaPosterior>(post);
    EXPECT_DOUBLE_EQ(b.a, 51.0);
    EXPECT_DOUBLE_EQ(b.b, 51.0);
    // Degenerate statistics are still proper.
    EXPECT_NO_THROW(posterior(Bernoulli{}, BetaPrior{1.0, 1.0}, {10, 0.0}));
    EXPECT_NO_THROW(posterior(Bernoulli{}, BetaPrior{1.0, 1.0}, {10, 10.0}));
}

TEST(Posterior, NormalNormal) {
    const auto post = posterior(NormalKnownVariance{0.2}, NormalPrior{0.25, 0.3}, {100, 0.5});
    EXPECT_NEAR(post_mean(post), 0.498344, 1e-6);
    EXPECT_NEAR(post_variance(post), 0.0019868, 1e-6);
}

TEST(Posterior, UnsupportedPairs) {
    EXPECT_THROW(posterior(Poisson{}, BetaPrior{}, {10, 3.0}), ConfigurationError);
    EXPECT_THROW(posterior(NormalKnownVariance{}, GammaPrior{}, {10, 3.0}), ConfigurationError);
    EXPECT_THROW(posterior(Bernoulli{}, NormalPrior{}, {10, 3.0}), ConfigurationError);
}

TEST(Posterior, StatisticChecks) {
    EXPECT_THROW(posterior(Bernoulli{}, BetaPrior{}, {10, 11.0}), DomainError);
    EXPECT_THROW(posterior(Bernoulli{}, BetaPrior{}, {10, 2.5}), DomainError);
    EXPECT_THROW(posterior(Poisson{}, GammaPrior{}, {10, -1.0}), DomainError);
    EXPECT_THROW(posterior(ExponentialRate{}, BetaPrior{1.5, 1.5}, {10, 0.0}), DomainError);
    EXPECT_THROW(posterior(Poisson{}, GammaPrior{}, {0, 0.0}), DomainError);
    EXPECT_THROW(posterior(Poisson{}, GammaPrior{0.0, 1.0}, {5, 1.0}), DomainError);
}

TEST(Posterior, ExponentialBetaGrid) {
    const auto post = posterior(ExponentialRate{}, BetaPrior{1.5, 1.5}, {100, 200.0});
    const auto& g = std::get<GridPosterior>(post);
    EXPECT_EQ(g.size(), kPosteriorGridNodes);
    EXPECT_DOUBLE_EQ(g.lo(), 1.0 / 4096.0);
    EXPECT_DOUBLE_EQ(g.hi(), 1.0);
    double total = 0.0;
    for (double w : g.weights()) {
        EXPECT_GE(w, 0.0);
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(post_mean(post), 0.5, 0.02);
    // Large n and large S must not overflow.
    const auto big = posterior(ExponentialRate{}, BetaPrior{1.5, 1.5}, {10'000, 20'000.0});
    EXPECT_TRUE(std::isfinite(post_mean(big)));
    EXPECT_NEAR(post_mean(big), 0.5, 0.01);
    // The grid needs a log density that is finite near the support edges.
    EXPECT_THROW(posterior(ExponentialRate{}, BetaPrior{0.5, 1.5}, {10, 20.0}), ConfigurationError);
}

TEST(PostMoments, Examples) {
    const Posterior normal = NormalPosterior{0.5, 0.002};
    EXPECT_EQ(post_mean(normal), 0.5);
    EXPECT_EQ(post_variance(normal), 0.002);
    const Posterior gamma = GammaPosterior{12.5, 8.5};
    EXPECT_NEAR(post_mean(gamma), 1.470588, 1e-6);
    EXPECT_NEAR(post_variance(gamma), 0.173010, 1e-6);
    const Posterior grid = tabulated_beta(3.0, 3.0);
    EXPECT_NEAR(post_mean(grid), 0.5, 1e-6);
    EXPECT_NEAR(post_variance(grid), 1.0 / 28.0, 1e-6);
}

TEST(PostQuantile, Examples) {
    const Posterior normal = NormalPosterior{0.498344, 0.0019868};
    EXPECT_NEAR(post_quantile(normal, 0.05), 0.425023, 1e-4);
    EXPECT_NEAR(post_quantile(NormalPosterior{1.3, 4.0}, 0.5), 1.3, 1e-12);
    EXPECT_NEAR(post_quantile(BetaPosterior{7.0, 7.0}, 0.5), 0.5, 1e-10);
    EXPECT_NEAR(post_quantile(tabulated_beta(3.0, 3.0), 0.5), 0.5, 1e-9);
    const double v = post_quantile(BetaPosterior{51.0, 51.0}, 0.975);
    EXPECT_NEAR(oracle::beta_cdf(51.0, 51.0, v), 0.975, 1e-6);
    EXPECT_THROW(post_quantile(normal, 0.0), DomainError);
    EXPECT_THROW(post_quantile(normal, 1.0), DomainError);
}

TEST(PostIntervalMass, Examples) {
    const Posterior normal = NormalPosterior{0.5, 0.01875};
    EXPECT_NEAR(post_interval_mass(normal, -kInf, kInf), 1.0, 1e-15);
    EXPECT_NEAR(post_interval_mass(normal, 0.475, 0.525), 0.14486, 2e-4);
    EXPECT_EQ(post_interval_mass(normal, 0.3, 0.3), 0.0);
    EXPECT_NEAR(post_interval_mass(BetaPosterior{2.0, 5.0}, 0.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(post_interval_mass(GammaPosterior{2.0, 5.0}, 0.0, kInf), 1.0, 1e-15);
    EXPECT_THROW(post_interval_mass(normal, 0.6, 0.5), DomainError);
}

TEST(PostProbAbove, Examples) {
    EXPECT_EQ(post_prob_above(BetaPosterior{2.0, 3.0}, -1.0), 1.0);
    EXPECT_EQ(post_prob_above(GammaPosterior{2.0, 3.0}, -1.0), 1.0);
    EXPECT_NEAR(post_prob_above(NormalPosterior{0.7, 0.3}, 0.7), 0.5, 1e-15);
    const double mean = 12.5 / 8.5;
    const double p = post_prob_above(GammaPosterior{12.5, 8.5}, mean);
    EXPECT_GT(p, 0.45);
    EXPECT_LT(p, 0.5);
    EXPECT_NEAR(p, 1.0 - oracle::gamma_cdf(12.5, 8.5, mean), 1e-12);
}

TEST(PostHpd, NormalIsEqualTailed) {
    const auto iv = post_hpd(NormalPosterior{0.0, 1.0}, 0.95);
    EXPECT_NEAR(iv.lo, -1.95996, 1e-5);
    EXPECT_NEAR(iv.hi, 1.95996, 1e-5);
    EXPECT_DOUBLE_EQ(iv.mass, 0.95);
}

TEST(PostHpd, SymmetricGridMatchesEqualTails) {
    const GridPosterior g = tabulated_beta(3.0, 3.0);
    const auto iv = g.hpd(0.9);
    EXPECT_NEAR(iv.lo, g.quantile(0.05), g.step());
    EXPECT_NEAR(iv.hi, g.quantile(0.95), g.step());
    EXPECT_NEAR(iv.lo + iv.hi, 1.0, g.step());
}

TEST(PostHpd, SkewedGammaIsShorterThanEqualTails) {
    const Posterior post = GammaPosterior{3.0, 2.0};
    const auto iv = post_hpd(post, 0.9);
    EXPECT_NEAR(post_interval_mass(post, iv.lo, iv.hi), 0.9, 1e-4);
    EXPECT_LT(iv.hi - iv.lo, post_quantile(post, 0.95) - post_quantile(post, 0.05));
    // Endpoints of an HPD interval share the density value.
    auto density = [](double t) { return t * t * std::exp(-2.0 * t); };
    EXPECT_NEAR(density(iv.lo) / density(iv.hi), 1.0, 1e-3);
}

TEST(PostHpd, MassWithinGridBand) {
    for (auto [a, b] : {std::pair{1.5, 1.5}, {3.0, 7.0}, {51.0, 20.0}}) {
        const GridPosterior g = tabulated_beta(a, b);
        for (double level : {0.5, 0.9, 0.95}) {
            const auto iv = g.hpd(level);
            EXPECT_GE(iv.mass, level - 1e-12);
            EXPECT_LE(iv.mass, level + 2.0 / static_cast<double>(g.size()));
            EXPECT_LE(iv.lo, iv.hi);
        }
    }
}

TEST(PostHpd, BimodalIsUnsupported) {
    const GridPosterior g = GridPosterior::tabulate(-6.0, 6.0, 2001, [](double t) {
        return std::log(std::exp(-8.0 * (t - 3.0) * (t - 3.0)) + std::exp(-8.0 * (t + 3.0) * (t + 3.0)));
    });
    EXPECT_THROW(g.hpd(0.9), UnsupportedShape);
    EXPECT_THROW(post_hpd(NormalPosterior{0.0, 1.0}, 1.0), DomainError);
}

TEST(PostHpd, ExponentialBetaAverageNearTable) {
    const auto lo = oracle_expbeta(Hpd{0.95}, BetaPrior{1.5, 1.5}, 0.5, 100);
    ASSERT_TRUE(lo.value.is_interval());
    EXPECT_NEAR(lo.value.value, 0.40, 0.02);
    EXPECT_NEAR(*lo.value.upper, 0.60, 0.02);
    EXPECT_NEAR(lo.value.width(), 0.196, 0.005);
}

TEST(Invariants, ConjugacySanity) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::int64_t>(1 + gen() % 200);
        const double dn = static_cast<double>(n);
        {
            const NormalPrior prior{4.0 * u(gen) - 2.0, 0.1 + u(gen)};
            const double xbar = 4.0 * u(gen) - 2.0;
            const double m = post_mean(posterior(NormalKnownVariance{0.5 + u(gen)}, prior, {n, xbar}));
            EXPECT_GE(m, std::min(prior.mu0, xbar) - 1e-12);
            EXPECT_LE(m, std::max(prior.mu0, xbar) + 1e-12);
        }
        {
            const GammaPrior prior{0.5 + 5.0 * u(gen), 0.5 + 5.0 * u(gen)};
            const double s = std::floor(3.0 * dn * u(gen));
            const double m = post_mean(posterior(Poisson{}, prior, {n, s}));
            const double prior_mean = prior.b / prior.a;
            EXPECT_GE(m, std::min(prior_mean, s / dn) - 1e-12);
            EXPECT_LE(m, std::max(prior_mean, s / dn) + 1e-12);
        }
        {
            const BetaPrior prior{0.5 + 5.0 * u(gen), 0.5 + 5.0 * u(gen)};
            const double s = std::floor((dn + 1.0) * u(gen));
            const double m = post_mean(posterior(Bernoulli{}, prior, {n, std::min(s, dn)}));
            const double prior_mean = prior.a / (prior.a + prior.b);
            const double mle = std::min(s, dn) / dn;
            EXPECT_GE(m, std::min(prior_mean, mle) - 1e-12);
            EXPECT_LE(m, std::max(prior_mean, mle) + 1e-12);
        }
    }
    double previous = kInf;
    for (std::int64_t n : {100, 1000, 10000}) {
        const double dn = static_cast<double>(n);
        const double vn = post_variance(posterior(NormalKnownVariance{1.0}, NormalPrior{}, {n, 0.3}));
        const double vp = post_variance(posterior(Poisson{}, GammaPrior{}, {n, 2.0 * dn}));
        const double vb = post_variance(posterior(Bernoulli{}, BetaPrior{}, {n, std::floor(0.3 * dn)}));
        const double ve = post_variance(posterior(ExponentialRate{}, BetaPrior{1.5, 1.5}, {n, 2.0 * dn}));
        const double worst = std::max({vn, vp, vb, ve});
        EXPECT_LT(worst, previous);
        previous = worst;
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(Invariants, GridReproducesBeta) {
    for (auto [a, b] : {std::pair{1.5, 1.5}, {3.0, 3.0}, {51.0, 51.0}}) {
        const GridPosterior g = tabulated_beta(a, b);
        const boost::math::beta_distribution<double> ref(a, b);
        EXPECT_NEAR(g.mean(), boost::math::mean(ref), 1e-5) << a;
        EXPECT_NEAR(g.variance(), boost::math::variance(ref), 1e-5) << a;
        for (double q : {0.025, 0.25, 0.5, 0.75, 0.975}) {
            EXPECT_NEAR(g.quantile(q), boost::math::quantile(ref, q), 1e-5) << a << ' ' << q;
        }
    }
}

TEST(Invariants, QuantileInvertsCdf) {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Posterior post;
        switch (trial % 4) {
            case 0: post = NormalPosterior{4.0 * u(gen) - 2.0, 0.01 + u(gen)}; break;
            case 1: post = GammaPosterior{0.5 + 50.0 * u(gen), 0.2 + 10.0 * u(gen)}; break;
            case 2: post = BetaPosterior{0.5 + 60.0 * u(gen), 0.5 + 60.0 * u(gen)}; break;
            default:
                post = posterior(ExponentialRate{}, BetaPrior{1.5, 1.5},
                                 {static_cast<std::int64_t>(5 + gen() % 100), 1.0 + 100.0 * u(gen)});
        }
        for (double p : {0.01, 0.2, 0.5, 0.8, 0.99}) {
            EXPECT_NEAR(post_cdf(post, post_quantile(post, p)), p, 1e-6) << trial;
        }
    }
}

TEST(Invariants, TautologicalCoverage) {
    const std::vector<Posterior> posts{NormalPosterior{0.2, 0.5}, GammaPosterior{8.5, 12.5}, BetaPosterior{51.0, 51.0},
                                       posterior(ExponentialRate{}, BetaPrior{1.5, 1.5}, {30, 70.0})};
    for (const auto& post : posts) {
        for (double alpha : {0.05, 0.5, 0.9}) {
            EXPECT_NEAR(post_interval_mass(post, -kInf, post_quantile(post, alpha)), alpha, 1e-9);
        }
    }
}

TEST(Functional, EvaluateDispatch) {
    const Posterior post = NormalPosterior{1.0, 0.25};
    EXPECT_DOUBLE_EQ(evaluate(post, Variance{}).value, 0.25);
    EXPECT_NEAR(evaluate(post, IntervalLength{0.05}).value, 2.0 * 0.5 * 1.959964, 1e-6);
    EXPECT_NEAR(evaluate(post, ProbAbove{1.0}).value, 0.5, 1e-15);
    const auto hpd = evaluate(post, Hpd{0.95});
    ASSERT_TRUE(hpd.is_interval());
    EXPECT_NEAR(hpd.width(), evaluate(post, IntervalLength{0.05}).value, 1e-12);
    EXPECT_THROW(validate(Functional{Quantile{1.5}}), DomainError);
    EXPECT_THROW(validate(Functional{CenteredMass{-0.1}}), DomainError);
}
