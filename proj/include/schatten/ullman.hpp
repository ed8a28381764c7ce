#pragma once

#include "schatten/numerics.hpp"
#include "schatten/random.hpp"

#include <math.h>  // boost 1.74 pchip calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace schatten {

// The Ullman distribution mu_p on [-1, 1] is the equilibrium measure of the
// external field V(x) = v_p |x|^p. Its density is
//
//     f_p(x) = (p / pi) * int_{|x|}^1 t^(p-1) / sqrt(t^2 - x^2) dt,
//
// which reduces to the semicircle (2/pi) sqrt(1 - x^2) at p = 2.

/// f_p(x). Zero outside [-1, 1]; +inf at x = 0 when p = 1.
double ullman_density(double p, double x);

/// f_p(x) through the substitution t = |x| / cos(a). Requires p > 1, 0 < |x| < 1.
double ullman_density_arccos_form(double p, double x);

/// f_p'(x) = ((p-1)/x) f_p(x) - (p/pi) / (x sqrt(1 - x^2)), odd in x.
/// x = 0 is accepted for p >= 2 (returns 0).
double ullman_density_derivative(double p, double x);

/// v_p = sqrt(pi) Gamma(p/2) / Gamma((p+1)/2), the field strength.
double constant_v(double p);
/// alpha_p = int |x|^p dmu_p = 1 / (p v_p).
double constant_alpha(double p);
/// alpha_p by quadrature of |x|^p f_p(x); independent of constant_v.
double constant_alpha_quadrature(double p);
/// A(p) = (1/2) (p v_p / sqrt(e))^(1/p); accepts p = +inf (A = 1/2).
double constant_A(double p);

struct UllmanConstants {
    double p;
    double v_p;
    double alpha_p;
    double A_p;
    double entropy;
    double log_energy;
    double I_p;  // log_energy + v_p * alpha_p
};

struct RegularityReport {
    double boundary_ratio_min;
    double boundary_ratio_max;
    double holder_exponent_at_0;  // NaN when f_p(0) is infinite (p = 1)
};

/// Immutable Ullman distribution with a precomputed CDF table.
class UllmanDistribution {
public:
    static constexpr std::size_t kHalfGridSize = 4096;

    explicit UllmanDistribution(double p);

    double p() const noexcept { return p_; }
    double density(double x) const { return ullman_density(p_, x); }

    /// F(x) = mu_p((-inf, x]), evaluated by quadrature (not the table).
    double cdf(double x) const;
    /// mu_p((|x|, 1]) for |x| <= 1; exact in the far tail where 1 - F underflows.
    double upper_tail(double x) const;
    /// Inverse of cdf on (0, 1).
    double quantile(double u) const;
    std::vector<double> sample(std::size_t count, RandomStream& stream) const;

    /// |int f_p - 1| measured at construction.
    double normalization_defect() const noexcept { return normalization_defect_; }
    /// (x, F(x)) pairs on [-1, 1], strictly increasing in both coordinates.
    const std::vector<std::pair<double, double>>& cdf_grid() const noexcept { return cdf_grid_; }

    /// -int f_p ln f_p.
    double entropy() const;
    /// -int int ln|x - y| dmu_p(x) dmu_p(y).
    double log_energy() const;
    UllmanConstants constants() const;

private:
    double p_;
    double normalization_defect_;
    std::vector<std::pair<double, double>> cdf_grid_;
    // x as a function of cbrt(upper tail) on [0, 1]; smooth at both ends.
    std::optional<boost::math::interpolators::pchip<std::vector<double>>> inverse_tail_;
};

/// Boundary behaviour f_p(x) / sqrt(1 - |x|) on |x| in [0.5, 1 - 1e-8] and a
/// log-log estimate of the Hoelder exponent of f_p at 0 over h in [1e-6, 1e-2].
RegularityReport regularity_report(double p);

/// -int ln|x - y| f_p(y) dy, the logarithmic potential of mu_p.
double ullman_log_potential(double p, double x);

}  // namespace schatten
