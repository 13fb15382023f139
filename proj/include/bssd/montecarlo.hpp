#pragma once

// Seeded Monte Carlo estimates G-hat = (1/m) sum_j F(W(.|X^n_j)).
//
// Replicate j draws from its own stream (seed, j), and per-replicate values
// are reduced in index order, so the estimate does not depend on how many
// workers evaluated the replicates.

#include "bssd/errors.hpp"
#include "bssd/functional.hpp"
#include "bssd/models.hpp"
#include "bssd/numerics.hpp"
#include "bssd/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bssd {

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    /// Upper endpoint for interval-valued functionals (mean is then the lower).
    std::optional<double> upper_mean;
    std::optional<double> upper_std_err;
    std::size_t m = 0;
    std::uint64_t seed = 0;
};

namespace detail {

struct MeanAndError {
    double mean;
    double std_err;
};

inline MeanAndError summarize(std::span<const double> xs) {
    const double m = static_cast<double>(xs.size());
    const double mean = pairwise_sum(xs) / m;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - mean;
        sq[i] = d * d;
    }
    const double sd = std::sqrt(pairwise_sum(sq) / (m - 1.0));
    return {mean, sd / std::sqrt(m)};
}

} // namespace detail

/// Estimates several functionals from the same m replicate datasets.
inline std::vector<MonteCarloEstimate> simulate_g(const Model& model, double theta0, std::int64_t n, std::size_t m,
                                                  std::span<const Functional> functionals, std::uint64_t seed,
                                                  std::size_t workers = 1) {
    validate(model);
    require_in_domain(model.family, theta0);
    for (const auto& f : functionals) validate(f);
    if (m < 2) {
        throw DomainError("simulate_g: m must be at least 2");
    }
    if (n < 1) {
        throw DomainError("simulate_g: n must be positive");
    }
    const std::size_t nf = functionals.size();
    std::vector<double> lower(m * nf);
    std::vector<double> upper(m * nf, 0.0);
    parallel_for(m, workers, [&](std::size_t j) {
        try {
            SeededGenerator rng(seed, j);
            const SufficientStat stat = sample_suffstat(model.family, theta0, n, rng);
            const Posterior post = posterior(model, stat);
            for (std::size_t k = 0; k < nf; ++k) {
                const FunctionalValue v = evaluate(post, functionals[k]);
                lower[k * m + j] = v.value;
                if (v.upper) upper[k * m + j] = *v.upper;
            }
        } catch (const std::exception& e) {
            throw ReplicateError("replicate " + std::to_string(j) + ": " + e.what(), j);
        }
    });

    std::vector<MonteCarloEstimate> out;
    out.reserve(nf);
    for (std::size_t k = 0; k < nf; ++k) {
        MonteCarloEstimate est;
        est.m = m;
        est.seed = seed;
        const auto lo = detail::summarize(std::span<const double>(lower).subspan(k * m, m));
        est.mean = lo.mean;
        est.std_err = lo.std_err;
        if (std::holds_alternative<Hpd>(functionals[k])) {
            const auto hi = detail::summarize(std::span<const double>(upper).subspan(k * m, m));
            est.upper_mean = hi.mean;
            est.upper_std_err = hi.std_err;
        }
        out.push_back(est);
    }
    return out;
}

inline MonteCarloEstimate simulate_g(const Model& model, double theta0, std::int64_t n, std::size_t m,
                                     const Functional& functional, std::uint64_t seed, std::size_t workers = 1) {
    return simulate_g(model, theta0, n, m, std::span<const Functional>(&functional, 1), seed, workers).front();
}

} // namespace bssd
