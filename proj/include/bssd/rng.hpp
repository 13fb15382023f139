#pragma once

// Seeded, platform-independent random streams and the sampling transforms
// used by the Monte Carlo harness.

#include "bssd/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

namespace bssd {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// A deterministic stream keyed by (seed, stream_id). The engine is
/// mt19937_64, whose output sequence is fixed by the C++ standard; all
/// transforms below are written out explicitly so that no
/// implementation-defined std:: distribution is involved.
class SeededGenerator {
public:
    explicit SeededGenerator(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id),
          engine_(detail::splitmix64(seed ^ detail::splitmix64(stream_id + 0x5851F42D4C957F2DULL))) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform() {
        for (;;) {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0) {
                return u;
            }
        }
    }

    /// Second Box-Muller output held back from the previous pair.
    std::optional<double>& spare_normal() noexcept { return spare_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// N(0,1) via the Box-Muller pair transform; the second deviate of each pair
/// is returned on the following call.
inline double normal_deviate(SeededGenerator& rng) {
    if (auto& spare = rng.spare_normal(); spare) {
        const double z = *spare;
        spare.reset();
        return z;
    }
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    rng.spare_normal() = radius * std::sin(angle);
    return radius * std::cos(angle);
}

/// Exponential(rate) by inversion of a supplied uniform.
inline double exponential_from_uniform(double u, double rate) {
    if (!(rate > 0.0)) {
        throw DomainError("exponential_deviate: rate must be positive");
    }
    return -std::log1p(-u) / rate;
}

inline double exponential_deviate(SeededGenerator& rng, double rate) {
    return exponential_from_uniform(rng.uniform(), rate);
}

/// Bernoulli(p) by inversion.
inline int bernoulli_deviate(SeededGenerator& rng, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("bernoulli_deviate: p must lie in [0, 1]");
    }
    return rng.uniform() < p ? 1 : 0;
}

/// Poisson(mean) by chop-down inversion. Means above 500 are split into
/// independent chunks so exp(-mean) never underflows.
inline std::int64_t poisson_deviate(SeededGenerator& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("poisson_deviate: mean must be finite and nonnegative");
    }
    constexpr double chunk = 500.0;
    std::int64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double mu = remaining > chunk ? chunk : remaining;
        remaining -= mu;
        double u = rng.uniform();
        double p = std::exp(-mu);
        std::int64_t k = 0;
        while (u > p) {
            u -= p;
            ++k;
            p *= mu / static_cast<double>(k);
            if (p <= 0.0) {
                break; // remaining mass below double resolution
            }
        }
        total += k;
    }
    return total;
}

} // namespace bssd
