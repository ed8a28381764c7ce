#pragma once

#include <stdexcept>
#include <string>

namespace schatten {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of refinement budget. Carries the best
/// estimate and its error bound so callers can decide whether to accept it.
class ToleranceNotMet : public std::runtime_error {
public:
    ToleranceNotMet(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Importance weights collapsed onto too few samples for the estimate to mean anything.
class UnreliableEstimate : public std::runtime_error {
public:
    UnreliableEstimate(const std::string& what, double log_estimate, double effective_sample_size)
        : std::runtime_error(what), log_estimate_(log_estimate), ess_(effective_sample_size) {}

    double log_estimate() const noexcept { return log_estimate_; }
    double effective_sample_size() const noexcept { return ess_; }

private:
    double log_estimate_;
    double ess_;
};

}  // namespace schatten
