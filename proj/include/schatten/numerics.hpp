#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace schatten {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kLnPi = 1.14472988584940017414342735135305871;
inline constexpr double kLn2Pi = 1.83787706640934548356065947281123527;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// ln Σ exp(v_i). Entries may be -inf; throws DomainError on empty input.
double log_sum_exp(std::span<const double> values);

/// ln((1/N) Σ exp(v_i)).
double log_mean_exp(std::span<const double> values);

//------------------------------------------------------------------------------
// Log-domain real numbers
//------------------------------------------------------------------------------

/// A real number stored as sign and natural log of its magnitude.
class LogNumber {
public:
    constexpr LogNumber() = default;

    static LogNumber from_log(double log_abs, int sign = 1);
    static LogNumber from_double(double value);
    static constexpr LogNumber zero() { return LogNumber{}; }

    int sign() const noexcept { return sign_; }
    /// Meaningless when sign() == 0.
    double log_abs() const noexcept { return log_abs_; }
    /// May overflow to ±inf; that is the caller's problem.
    double to_double() const noexcept;

    LogNumber operator-() const noexcept;
    friend LogNumber operator*(const LogNumber& a, const LogNumber& b) noexcept;
    friend LogNumber operator/(const LogNumber& a, const LogNumber& b);
    friend LogNumber operator+(const LogNumber& a, const LogNumber& b) noexcept;
    friend LogNumber operator-(const LogNumber& a, const LogNumber& b) noexcept { return a + (-b); }

private:
    int sign_ = 0;
    double log_abs_ = 0.0;
};

//------------------------------------------------------------------------------
// Adaptive quadrature
//------------------------------------------------------------------------------

enum class EndpointSingularity {
    none,
    inverse_sqrt_left,   // integrand ~ (x - a)^(-1/2)
    inverse_sqrt_right,  // integrand ~ (b - x)^(-1/2)
    both,
};

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 40;
    EndpointSingularity endpoint_singularity = EndpointSingularity::none;

    QuadratureSpec with(EndpointSingularity s) const {
        QuadratureSpec out = *this;
        out.endpoint_singularity = s;
        return out;
    }
};

struct QuadratureResult {
    double value;
    double error_bound;
    int panels;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Inverse square-root endpoint singularities are removed by the
/// substitution t = a + u^2 (resp. t = b - u^2) before integrating.
/// Throws ToleranceNotMet if a panel would exceed spec.max_depth bisections.
QuadratureResult integrate_detailed(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec = {});

inline double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {}) {
    return integrate_detailed(f, a, b, spec).value;
}

}  // namespace schatten
