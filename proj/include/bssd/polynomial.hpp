#pragma once

// Dense univariate polynomials and the Gaussian moment algebra used by the
// expansion evaluators.

#include "bssd/errors.hpp"
#include "bssd/specfun.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

namespace bssd {

/// Real polynomial sum_k c_k v^k in canonical form: the highest stored
/// coefficient is nonzero, and the zero polynomial stores nothing.
class Polynomial {
public:
    Polynomial() = default;

    Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {
        trim();
    }

    explicit Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
        trim();
    }

    static Polynomial constant(double c) { return Polynomial{c}; }

    /// v^k.
    static Polynomial monomial(std::size_t k, double c = 1.0) {
        std::vector<double> v(k + 1, 0.0);
        v[k] = c;
        return Polynomial(std::move(v));
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Degree; zero polynomial reports 0.
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

    /// Coefficient of v^k (zero beyond the stored range).
    double operator[](std::size_t k) const noexcept {
        return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }

    std::span<const double> coefficients() const noexcept { return coeffs_; }

    double operator()(double v) const noexcept {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * v + *it;
        }
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) {
            return {};
        }
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) {
            d[k - 1] = static_cast<double>(k) * coeffs_[k];
        }
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::vector<double> s(std::max(p.coeffs_.size(), q.coeffs_.size()), 0.0);
        for (std::size_t k = 0; k < s.size(); ++k) {
            s[k] = p[k] + q[k];
        }
        return Polynomial(std::move(s));
    }

    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
        return p + q * -1.0;
    }

    friend Polynomial operator*(const Polynomial& p, double c) {
        std::vector<double> s(p.coeffs_);
        for (auto& x : s) {
            x *= c;
        }
        return Polynomial(std::move(s));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) {
            coeffs_.pop_back();
        }
    }

    std::vector<double> coeffs_;
};

/// Exact coefficient convolution.
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) {
        return {};
    }
    std::vector<double> r(p.degree() + q.degree() + 1, 0.0);
    for (std::size_t i = 0; i <= p.degree(); ++i) {
        for (std::size_t j = 0; j <= q.degree(); ++j) {
            r[i + j] += p[i] * q[j];
        }
    }
    return Polynomial(std::move(r));
}

inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return poly_mul(p, q); }

/// H_i with d^i/dv^i phi(sqrt(info) v) = H_i(v) phi(sqrt(info) v), built by
/// H_{i+1} = H_i' - info * v * H_i. H_1 = -info * v (sign follows the
/// derivative identity, not the probabilists' convention).
inline Polynomial hermite_poly(unsigned i, double info) {
    if (!(info > 0.0) || !std::isfinite(info)) {
        throw DomainError("hermite_poly: info must be positive");
    }
    Polynomial h = Polynomial::constant(1.0);
    const Polynomial shift = Polynomial::monomial(1, info);
    for (unsigned k = 0; k < i; ++k) {
        h = h.derivative() - poly_mul(shift, h);
    }
    return h;
}

/// E p(Z), Z ~ N(0,1).
inline double expect_std_normal(const Polynomial& p) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= p.degree(); ++k) {
        acc += p[k] * normal_moment(static_cast<unsigned>(k));
    }
    return acc;
}

/// E p(Z / sqrt 2): each v^k is replaced by sigma_k / 2^{k/2}.
inline double expect_half_variance(const Polynomial& p) {
    double acc = 0.0;
    double scale = 1.0;
    for (std::size_t k = 0; k <= p.degree(); ++k) {
        acc += p[k] * normal_moment(static_cast<unsigned>(k)) * scale;
        scale *= std::numbers::sqrt2 / 2.0;
    }
    return acc;
}

/// Integral of q(v) phi(v)^2 over the real line, scalar case.
inline double gaussian_product_expectation(const Polynomial& q) {
    return expect_half_variance(q) / std::sqrt(4.0 * std::numbers::pi);
}

} // namespace bssd
