#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bssd {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Unsupported (likelihood, prior) pairing or an otherwise invalid setup.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The planning range drives the information functional to zero, so no
/// finite sample size meets the criterion.
class CriterionUnsatisfiable : public std::runtime_error {
public:
    CriterionUnsatisfiable(const std::string& what, double theta)
        : std::runtime_error(what), theta_(theta) {}

    /// Parameter value at which the infimum collapsed.
    double theta() const noexcept { return theta_; }

private:
    double theta_;
};

/// A numerical routine could not certify the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Posterior shape not handled by the requested summary (e.g. a
/// multimodal super-level set when asking for an HPD interval).
class UnsupportedShape : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside one Monte Carlo replicate.
class ReplicateError : public std::runtime_error {
public:
    ReplicateError(const std::string& what, std::size_t replicate)
        : std::runtime_error(what), replicate_(replicate) {}

    std::size_t replicate() const noexcept { return replicate_; }

private:
    std::size_t replicate_;
};

} // namespace bssd
