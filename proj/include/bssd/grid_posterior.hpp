#pragma once

#include "bssd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bssd {

struct HpdInterval {
    double lo;
    double hi;
    double mass; ///< posterior mass actually enclosed
};

/// A posterior tabulated on K uniform nodes over [lo, hi]. The density is
/// treated as piecewise linear between nodes; weights are the trapezoid
/// masses of the nodes and sum to one.
class GridPosterior {
public:
    /// Normalizes exp(log_density) by the trapezoid rule after subtracting
    /// the maximum, so large log values are safe.
    static GridPosterior from_log_density(double lo, double hi, std::span<const double> log_density) {
        const std::size_t k = log_density.size();
        if (k < 2 || !(lo < hi)) {
            throw DomainError("grid posterior needs at least two nodes and lo < hi");
        }
        const double peak = *std::max_element(log_density.begin(), log_density.end());
        if (!std::isfinite(peak)) {
            throw DomainError("grid posterior: log density has no finite maximum");
        }
        GridPosterior g;
        g.lo_ = lo;
        g.hi_ = hi;
        g.step_ = (hi - lo) / static_cast<double>(k - 1);
        g.density_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double v = log_density[i];
            if (std::isnan(v)) {
                throw DomainError("grid posterior: log density is NaN at node " + std::to_string(i));
            }
            g.density_[i] = std::exp(v - peak);
        }
        g.cumulative_.assign(k, 0.0);
        for (std::size_t i = 1; i < k; ++i) {
            g.cumulative_[i] = g.cumulative_[i - 1] + 0.5 * g.step_ * (g.density_[i - 1] + g.density_[i]);
        }
        const double total = g.cumulative_.back();
        for (auto& d : g.density_) d /= total;
        for (auto& c : g.cumulative_) c /= total;
        g.cumulative_.back() = 1.0;
        g.weights_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double w = (i == 0 || i + 1 == k) ? 0.5 * g.step_ : g.step_;
            g.weights_[i] = w * g.density_[i];
        }
        return g;
    }

    template <class LogDensity>
    static GridPosterior tabulate(double lo, double hi, std::size_t nodes, LogDensity&& log_density) {
        if (nodes < 2) {
            throw DomainError("grid posterior needs at least two nodes");
        }
        std::vector<double> values(nodes);
        const double step = (hi - lo) / static_cast<double>(nodes - 1);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double t = i + 1 == nodes ? hi : lo + static_cast<double>(i) * step;
            values[i] = log_density(t);
        }
        return from_log_density(lo, hi, values);
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return density_.size(); }
    double node(std::size_t i) const noexcept {
        return i + 1 == density_.size() ? hi_ : lo_ + static_cast<double>(i) * step_;
    }

    std::span<const double> density() const noexcept { return density_; }
    std::span<const double> weights() const noexcept { return weights_; }
    /// Trapezoid CDF at each node.
    std::span<const double> cumulative() const noexcept { return cumulative_; }

    double mean() const noexcept {
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i) m += weights_[i] * node(i);
        return m;
    }

    double variance() const noexcept {
        const double m = mean();
        double v = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            const double d = node(i) - m;
            v += weights_[i] * d * d;
        }
        return v;
    }

    /// Linear interpolation of the nodal trapezoid CDF.
    double cdf(double x) const noexcept {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const double pos = (x - lo_) / step_;
        const auto i = std::min(static_cast<std::size_t>(pos), size() - 2);
        const double t = pos - static_cast<double>(i);
        return cumulative_[i] + t * (cumulative_[i + 1] - cumulative_[i]);
    }

    /// Inverse of cdf().
    double quantile(double alpha) const {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw DomainError("grid quantile: alpha must lie in (0, 1)");
        }
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), alpha);
        const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin(), 1));
        const double c0 = cumulative_[i - 1];
        const double c1 = cumulative_[i];
        const double t = c1 > c0 ? (alpha - c0) / (c1 - c0) : 0.0;
        return node(i - 1) + t * (node(i) - node(i - 1));
    }

    /// Water-filling HPD: the largest density cutoff c whose super-level set
    /// {f >= c} (f piecewise linear) still holds at least `level` mass.
    HpdInterval hpd(double level) const {
        if (!(level > 0.0 && level < 1.0)) {
            throw DomainError("grid hpd: level must lie in (0, 1)");
        }
        const std::size_t mode = static_cast<std::size_t>(
            std::max_element(density_.begin(), density_.end()) - density_.begin());
        const double fmax = density_[mode];
        const double slack = 1e-12 * fmax;
        bool unimodal = true;
        for (std::size_t i = 1; i <= mode && unimodal; ++i) {
            unimodal = density_[i] + slack >= density_[i - 1];
        }
        for (std::size_t i = mode + 1; i < size() && unimodal; ++i) {
            unimodal = density_[i] <= density_[i - 1] + slack;
        }
        return unimodal ? hpd_unimodal(level, mode) : hpd_general(level);
    }

private:
    struct Cut {
        double lo;
        double hi;
        double mass;
    };

    // Mass of f over [node(i) - left, node(j) + right] where the partial
    // segments run down to the cutoff.
    Cut cut_unimodal(double c, std::size_t mode) const {
        const auto n = size();
        // First index on the rising side with f >= c.
        std::size_t i = static_cast<std::size_t>(
            std::partition_point(density_.begin(), density_.begin() + static_cast<std::ptrdiff_t>(mode),
                                 [&](double f) { return f < c; }) -
            density_.begin());
        // Last index on the falling side with f >= c.
        std::size_t j = static_cast<std::size_t>(
                            std::partition_point(density_.begin() + static_cast<std::ptrdiff_t>(mode), density_.end(),
                                                 [&](double f) { return f >= c; }) -
                            density_.begin()) -
                        1;
        double mass = cumulative_[j] - cumulative_[i];
        double a = node(i);
        double b = node(j);
        if (i > 0) {
            const double f0 = density_[i - 1];
            const double f1 = density_[i];
            const double frac = f1 > f0 ? (f1 - c) / (f1 - f0) : 0.0;
            a = node(i) - frac * step_;
            mass += 0.5 * (node(i) - a) * (c + f1);
        }
        if (j + 1 < n) {
            const double f0 = density_[j];
            const double f1 = density_[j + 1];
            const double frac = f0 > f1 ? (f0 - c) / (f0 - f1) : 0.0;
            b = node(j) + frac * step_;
            mass += 0.5 * (b - node(j)) * (c + f0);
        }
        return {a, b, mass};
    }

    HpdInterval hpd_unimodal(double level, std::size_t mode) const {
        double c_lo = 0.0;
        double c_hi = density_[mode];
        for (int it = 0; it < 200 && c_hi - c_lo > 1e-15 * density_[mode]; ++it) {
            const double c = 0.5 * (c_lo + c_hi);
            if (cut_unimodal(c, mode).mass >= level) {
                c_lo = c;
            } else {
                c_hi = c;
            }
        }
        const Cut cut = cut_unimodal(c_lo, mode);
        return {cut.lo, cut.hi, std::min(cut.mass, 1.0)};
    }

    // O(K) evaluation for densities that are not monotone on either side of
    // the mode; rejects cutoffs whose super-level set is not one interval.
    HpdInterval hpd_general(double level) const {
        auto evaluate = [&](double c, bool strict) {
            const std::size_t n = size();
            std::size_t runs = 0;
            double a = lo_;
            double b = hi_;
            double mass = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double f = density_[i];
                if (f < c) continue;
                if (i == 0 || density_[i - 1] < c) {
                    if (runs++ == 0) {
                        a = i == 0 ? node(0) : node(i) - step_ * (f - c) / (f - density_[i - 1]);
                    }
                }
                if (i + 1 == n || density_[i + 1] < c) {
                    b = i + 1 == n ? node(i) : node(i) + step_ * (f - c) / (f - density_[i + 1]);
                }
            }
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double f0 = density_[i];
                const double f1 = density_[i + 1];
                if (f0 >= c && f1 >= c) {
                    mass += 0.5 * step_ * (f0 + f1);
                } else if (f0 >= c || f1 >= c) {
                    const double high = std::max(f0, f1);
                    const double width = step_ * (high - c) / (high - std::min(f0, f1));
                    mass += 0.5 * width * (c + high);
                }
            }
            if (strict && runs > 1) {
                throw UnsupportedShape("hpd: super-level set is not a single interval");
            }
            return Cut{a, b, mass};
        };
        double c_lo = 0.0;
        double c_hi = *std::max_element(density_.begin(), density_.end());
        const double top = c_hi;
        for (int it = 0; it < 200 && c_hi - c_lo > 1e-15 * top; ++it) {
            const double c = 0.5 * (c_lo + c_hi);
            if (evaluate(c, false).mass >= level) c_lo = c; else c_hi = c;
        }
        const Cut cut = evaluate(c_lo, true);
        return {cut.lo, cut.hi, std::min(cut.mass, 1.0)};
    }

    double lo_ = 0.0;
    double hi_ = 1.0;
    double step_ = 1.0;
    std::vector<double> density_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

} // namespace bssd
