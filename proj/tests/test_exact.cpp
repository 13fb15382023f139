#include "bssd/exact.hpp"
#include "bssd/montecarlo.hpp"
#include "bssd/tables.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bssd;

namespace {

const NormalNormalRow& eta(std::size_t i) { return table1_parameters().at(i); }

ExactEval normal_exact(const Functional& f, const NormalNormalRow& row, double n) {
    return exact_g_normal(f, NormalKnownVariance{row.sigma2}, NormalPrior{row.mu0, row.tau2}, row.theta0, n);
}

} // namespace

TEST(ExactNormal, TableExamples) {
    EXPECT_NEAR(normal_exact(Variance{}, eta(0), 10).value.value, 0.0187, 1e-4);
    EXPECT_NEAR(normal_exact(Quantile{0.05}, eta(1), 30).value.value, 4.4911, 1e-4);
    EXPECT_NEAR(normal_exact(CenteredMass{eta(0).theta0 / 10.0}, eta(0), 10).value.value, 0.1449, 2e-4);
    EXPECT_EQ(normal_exact(Variance{}, eta(0), 10).method, ExactMethod::closed_form);
}

TEST(ExactNormal, ClosedFormsAgreeWithDirectAlgebra) {
    const auto& row = eta(1);
    const double n = 30.0;
    const double var = row.sigma2 / (n + row.sigma2 / row.tau2);
    EXPECT_NEAR(normal_exact(Variance{}, row, n).value.value, var, 1e-15);
    EXPECT_NEAR(normal_exact(IntervalLength{0.05}, row, n).value.value, 2.0 * 1.959963984540054 * std::sqrt(var),
                1e-12);
    const auto hpd = normal_exact(Hpd{0.95}, row, n).value;
    ASSERT_TRUE(hpd.is_interval());
    EXPECT_NEAR(hpd.width(), normal_exact(IntervalLength{0.05}, row, n).value.value, 1e-12);
}

TEST(ExactNormal, EffectSizeBetweenHalfAndOneAndIncreasing) {
    // theta1 = theta0 - 3 sigma0 / sqrt(n0) is fixed at n0 = 10 and the
    // sample size then grows. With theta1 moving as 3 sigma0 / sqrt(n) the
    // value tends to Phi(3 / sqrt 2) but not monotonically: prior bias and
    // shrinkage enter at order 1/n with opposite signs.
    const auto& row = eta(0);
    const double theta1 = row.theta0 - 3.0 * std::sqrt(row.sigma2) / std::sqrt(10.0);
    double prev = 0.5;
    for (double n : {10.0, 20.0, 30.0, 50.0, 100.0}) {
        const double v = normal_exact(ProbAbove{theta1}, row, n).value.value;
        EXPECT_GT(v, prev) << n;
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    for (double n : {10.0, 100.0, 10000.0}) {
        const double moving = row.theta0 - 3.0 * std::sqrt(row.sigma2) / std::sqrt(n);
        const double v = normal_exact(ProbAbove{moving}, row, n).value.value;
        EXPECT_GT(v, 0.5);
        EXPECT_LT(v, 1.0);
    }
    const double limit = normal_exact(ProbAbove{row.theta0 - 3.0 * std::sqrt(row.sigma2) / 1e3}, row, 1e6).value.value;
    EXPECT_NEAR(limit, 0.983052, 1e-4);
}

TEST(ExactPoissonGamma, TableExamples) {
    EXPECT_NEAR(exact_apvc_poisson_gamma(2.5, 3.5, 0.5, 100).value.value, 0.0051, 1e-4);
    EXPECT_NEAR(exact_apvc_poisson_gamma(8.0, 7.5, 1.6, 30).value.value, 0.0384, 1e-4);
    const double n = 1e8;
    EXPECT_NEAR(n * exact_apvc_poisson_gamma(2.5, 3.5, 0.5, n).value.value, 0.5, 1e-6);
    EXPECT_THROW(exact_apvc_poisson_gamma(0.0, 3.5, 0.5, 10), DomainError);
}

TEST(ExactBinomialUniform, TableExamples) {
    EXPECT_NEAR(exact_apvc_binomial_uniform(0.5, 100).value.value, 0.0024, 1e-4);
    EXPECT_NEAR(exact_apvc_binomial_uniform(0.75, 50).value.value, 0.0036, 1e-4);
    const double n = 1e8;
    EXPECT_NEAR(n * exact_apvc_binomial_uniform(0.5, n).value.value, 0.25, 1e-6);
    EXPECT_THROW(exact_apvc_binomial_uniform(1.0, 10), DomainError);
}

TEST(ExactBinomialUniform, MatchesSummationOverOutcomes) {
    // E Var over S ~ Binomial(n, theta0) of the Beta(S + 1, n + 1 - S)
    // posterior variance, summed directly.
    for (double t : {0.2, 0.5, 0.75}) {
        for (int n : {1, 7, 30}) {
            double total = 0.0;
            for (int s = 0; s <= n; ++s) {
                const double logp = std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0) +
                                    s * std::log(t) + (n - s) * std::log1p(-t);
                const double a = s + 1.0;
                const double b = n - s + 1.0;
                total += std::exp(logp) * a * b / ((a + b) * (a + b) * (a + b + 1.0));
            }
            EXPECT_NEAR(exact_apvc_binomial_uniform(t, n).value.value, total, 1e-14) << t << ' ' << n;
        }
    }
}

TEST(Invariants, AsymptoticAgreementAtN100) {
    for (const auto& row : table1_parameters()) {
        const NormalKnownVariance lik{row.sigma2};
        for (const Functional& f : {Functional{Variance{}}, Functional{Quantile{0.05}},
                                    Functional{CenteredMass{row.theta0 / 10.0}}}) {
            const double exact = normal_exact(f, row, 100).value.value;
            const double star = g_star(f, lik, row.theta0, 100).value;
            EXPECT_LE(std::abs(exact - star) / std::abs(star), 0.1) << row.label << ' ' << functional_name(f);
        }
    }
    // The Poisson rows carry a 1/n relative gap of about (2a - b / theta0) / n,
    // which exceeds 10% at n = 100 for eta2 and eta3 (0.0144 vs 0.0160 and
    // 0.0134 vs 0.0150 in the published table). Check that bound at n = 100
    // and the 10% band from n = 200 on.
    for (const auto& row : table2_poisson_parameters()) {
        for (double n : {100.0, 200.0, 1000.0}) {
            const double exact = exact_apvc_poisson_gamma(row.a, row.b, row.theta0, n).value.value;
            const double star = g_star(Variance{}, Poisson{}, row.theta0, n).value;
            const double gap = std::abs(exact - star) / star;
            EXPECT_LE(gap, (2.0 * row.a + row.b / row.theta0) / n) << row.label << ' ' << n;
            if (n >= 200.0) {
                EXPECT_LE(gap, 0.1) << row.label << ' ' << n;
            }
        }
    }
    for (double t : table2_binomial_parameters()) {
        const double exact = exact_apvc_binomial_uniform(t, 100).value.value;
        const double star = g_star(Variance{}, Bernoulli{}, t, 100).value;
        EXPECT_LE(std::abs(exact - star) / star, 0.1) << t;
    }
}

TEST(Invariants, ScaledGapSettles) {
    // n |exact - G*| converges, so its successive changes shrink.
    auto scaled = [](double n) {
        const auto& row = table2_poisson_parameters()[1];
        return n * std::abs(exact_apvc_poisson_gamma(row.a, row.b, row.theta0, n).value.value -
                            g_star(Variance{}, Poisson{}, row.theta0, n).value);
    };
    const double a = scaled(1e2), b = scaled(1e3), c = scaled(1e4), d = scaled(1e5);
    EXPECT_LT(std::abs(d - c), std::abs(c - b));
    EXPECT_LT(std::abs(c - b), std::abs(b - a));
    EXPECT_LT(d, 1.0);
}

TEST(OracleExpBeta, MatchesMonteCarlo) {
    const Model model{ExponentialRate{}, BetaPrior{1.5, 1.5}};
    const auto oracle = oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, 0.5, 100);
    EXPECT_EQ(oracle.method, ExactMethod::suffstat_quadrature);
    EXPECT_LE(oracle.error_estimate, 1e-6);
    const auto mc = simulate_g(model, 0.5, 100, 2000, Variance{}, kDefaultSeed);
    EXPECT_LE(std::abs(oracle.value.value - mc.mean), 3.0 * mc.std_err);
}

TEST(OracleExpBeta, LargeNLimit) {
    const double n = 1e4;
    const auto v = oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, 0.5, static_cast<std::int64_t>(n));
    EXPECT_NEAR(n * v.value.value, 0.25, 0.02 * 0.25);
}

TEST(OracleExpBeta, AlcAgreesWithMonteCarloAndLeadingTerm) {
    // The published empirical value for this cell (0.1106) sits about 10.1%
    // above the oracle; the comparison with it lives in the acceptance suite.
    const Model model{ExponentialRate{}, BetaPrior{1.5, 1.5}};
    const auto v = oracle_expbeta(IntervalLength{0.05}, BetaPrior{1.5, 1.5}, 0.25, 100);
    const auto mc = simulate_g(model, 0.25, 100, 2000, IntervalLength{0.05}, kDefaultSeed);
    EXPECT_LE(std::abs(v.value.value - mc.mean), 3.5 * mc.std_err);
    const double star = g_star(IntervalLength{0.05}, ExponentialRate{}, 0.25, 100).value;
    EXPECT_NEAR(v.value.value / star, 1.0, 0.02);
}

TEST(OracleExpBeta, NodeBudgetsAgree) {
    const std::vector<Functional> fs{Variance{}, Quantile{0.05}, IntervalLength{0.05}, Hpd{0.95}, ProbAbove{0.45}};
    for (double theta0 : {0.25, 0.5, 0.75}) {
        for (std::int64_t n : {10, 100}) {
            const auto coarse = oracle_expbeta(fs, BetaPrior{1.5, 1.5}, theta0, n, 2001);
            const auto fine = oracle_expbeta(fs, BetaPrior{1.5, 1.5}, theta0, n, 4001);
            for (std::size_t j = 0; j < fs.size(); ++j) {
                const double a = coarse[j].value.value;
                const double b = fine[j].value.value;
                EXPECT_LE(std::abs(a - b), 1e-6 * std::abs(b)) << theta0 << ' ' << n << ' ' << j;
                EXPECT_LE(coarse[j].error_estimate, 1e-6);
                if (coarse[j].value.upper) {
                    EXPECT_LE(std::abs(*coarse[j].value.upper - *fine[j].value.upper), 1e-6 * *fine[j].value.upper);
                }
            }
        }
    }
}

TEST(OracleExpBeta, DeterministicAcrossWorkers) {
    const std::vector<Functional> fs{Variance{}, Hpd{0.95}};
    const auto one = oracle_expbeta(fs, BetaPrior{1.5, 1.5}, 0.5, 50, 2001, 1);
    const auto four = oracle_expbeta(fs, BetaPrior{1.5, 1.5}, 0.5, 50, 2001, 4);
    for (std::size_t j = 0; j < fs.size(); ++j) {
        EXPECT_EQ(one[j].value.value, four[j].value.value);
        EXPECT_EQ(one[j].value.upper, four[j].value.upper);
    }
}

TEST(OracleExpBeta, Errors) {
    EXPECT_THROW(oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, 0.5, 100, 2000), DomainError);
    EXPECT_THROW(oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, -0.5, 100), DomainError);
    EXPECT_THROW(oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, 0.5, 0), DomainError);
    // Five nodes cannot resolve the sampling density.
    EXPECT_THROW(oracle_expbeta(Variance{}, BetaPrior{1.5, 1.5}, 0.5, 100, 5), AccuracyError);
}

TEST(ExactDispatch, CoversSupportedPairs) {
    EXPECT_TRUE(exact_g({Poisson{}, GammaPrior{2.5, 3.5}}, Variance{}, 0.5, 10));
    EXPECT_FALSE(exact_g({Poisson{}, GammaPrior{2.5, 3.5}}, CenteredMass{0.1}, 0.5, 10));
    EXPECT_TRUE(exact_g({Bernoulli{}, BetaPrior{1.0, 1.0}}, Variance{}, 0.5, 10));
    EXPECT_FALSE(exact_g({Bernoulli{}, BetaPrior{2.0, 1.0}}, Variance{}, 0.5, 10));
    EXPECT_TRUE(exact_g({NormalKnownVariance{0.2}, NormalPrior{}}, ProbAbove{0.1}, 0.5, 10));
    EXPECT_TRUE(exact_g({ExponentialRate{}, BetaPrior{1.5, 1.5}}, Quantile{0.05}, 0.5, 10));
}
