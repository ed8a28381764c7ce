#include "schatten/ullman.hpp"

#include "schatten/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schatten {

namespace {

void require_p(double p, const char* who) {
    if (!std::isfinite(p) || p < 1.0) {
        throw DomainError(std::string(who) + ": p must be finite and >= 1, got " + std::to_string(p));
    }
}

// Tight enough that differences f_p(h) - f_p(0) at h = 1e-6 stay resolvable.
constexpr QuadratureSpec kDensitySpec{1e-15, 1e-13, 50};

double density_at_zero(double p) { return p == 1.0 ? kInf : p / (kPi * (p - 1.0)); }

// With t = |x| cosh(s) the kernel t^(p-1) / sqrt(t^2 - x^2) dt becomes
// (|x| cosh s)^(p-1) ds, which has no singularity left.
double density_abs(double p, double ax) {
    if (ax >= 1.0) return 0.0;
    if (ax == 0.0) return density_at_zero(p);
    const double s_max = std::log((1.0 + std::sqrt((1.0 - ax) * (1.0 + ax))) / ax);
    if (p == 1.0) return s_max / kPi;
    const double log_ax = std::log(ax);
    auto kernel = [&](double s) {
        const double t = 0.5 * (std::exp(s + log_ax) + std::exp(-s + log_ax));
        return std::pow(t, p - 1.0);
    };
    return p / kPi * integrate(kernel, 0.0, s_max, kDensitySpec);
}

// mu_p((x, 1]) = (p / pi) int_x^1 t^(p-1) arccos(x / t) dt for x in [0, 1].
double upper_tail_abs(double p, double x) {
    if (x >= 1.0) return 0.0;
    if (x == 0.0) return 0.5;
    auto kernel = [&](double t) {
        const double angle = std::atan2(std::sqrt(std::max(0.0, (t - x) * (t + x))), x);
        return std::pow(t, p - 1.0) * angle;
    };
    const QuadratureSpec spec{1e-16, 1e-12, 50, EndpointSingularity::inverse_sqrt_left};
    return p / kPi * integrate(kernel, x, 1.0, spec);
}

}  // namespace

double ullman_density(double p, double x) {
    require_p(p, "ullman_density");
    if (!std::isfinite(x)) throw DomainError("ullman_density: x must be finite");
    return density_abs(p, std::fabs(x));
}

double ullman_density_arccos_form(double p, double x) {
    if (!std::isfinite(p) || p <= 1.0) throw DomainError("ullman_density_arccos_form: need p > 1");
    const double ax = std::fabs(x);
    if (!(ax > 0.0 && ax < 1.0)) throw DomainError("ullman_density_arccos_form: need 0 < |x| < 1");
    const double integral =
        integrate([&](double a) { return std::pow(std::cos(a), -p); }, 0.0, std::acos(ax), kDensitySpec);
    return p / kPi * std::pow(ax, p - 1.0) * integral;
}

double ullman_density_derivative(double p, double x) {
    if (!std::isfinite(p) || p <= 1.0) throw DomainError("ullman_density_derivative: need p > 1");
    if (!(std::fabs(x) < 1.0)) throw DomainError("ullman_density_derivative: need |x| < 1");
    if (x == 0.0) {
        if (p >= 2.0) return 0.0;
        throw DomainError("ullman_density_derivative: f_p is not differentiable at 0 for p < 2");
    }
    const double ax = std::fabs(x);
    const double slope = (p - 1.0) / ax * density_abs(p, ax) -
                         p / kPi / (ax * std::sqrt((1.0 - ax) * (1.0 + ax)));
    return x > 0.0 ? slope : -slope;
}

double constant_v(double p) {
    require_p(p, "constant_v");
    return std::exp(0.5 * kLnPi + log_gamma(0.5 * p) - log_gamma(0.5 * (p + 1.0)));
}

double constant_alpha(double p) { return 1.0 / (p * constant_v(p)); }

double constant_alpha_quadrature(double p) {
    require_p(p, "constant_alpha_quadrature");
    const QuadratureSpec spec{1e-14, 1e-12, 50, EndpointSingularity::inverse_sqrt_right};
    return 2.0 * integrate([&](double x) { return std::pow(x, p) * density_abs(p, x); }, 0.0, 1.0, spec);
}

double constant_A(double p) {
    if (std::isinf(p) && p > 0) return 0.5;
    require_p(p, "constant_A");
    return 0.5 * std::exp((std::log(p * constant_v(p)) - 0.5) / p);
}

//------------------------------------------------------------------------------
// UllmanDistribution
//------------------------------------------------------------------------------

UllmanDistribution::UllmanDistribution(double p) : p_(p) {
    require_p(p, "UllmanDistribution");

    const QuadratureSpec norm_spec{1e-13, 1e-13, 50, EndpointSingularity::inverse_sqrt_right};
    normalization_defect_ =
        std::fabs(2.0 * integrate([&](double x) { return density_abs(p, x); }, 0.0, 1.0, norm_spec) - 1.0);

    constexpr std::size_t n = kHalfGridSize;
    std::vector<double> xs(n);
    std::vector<double> tails(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Chebyshev spacing, clustered at x = 1 where the tail behaves like (1-x)^(3/2).
        xs[k] = k + 1 == n ? 1.0 : std::sin(0.5 * kPi * static_cast<double>(k) / static_cast<double>(n - 1));
        tails[k] = upper_tail_abs(p, xs[k]);
    }

    cdf_grid_.reserve(2 * n - 1);
    for (std::size_t k = n - 1; k >= 1; --k) cdf_grid_.emplace_back(-xs[k], tails[k]);
    cdf_grid_.emplace_back(0.0, 0.5);
    for (std::size_t k = 1; k < n; ++k) cdf_grid_.emplace_back(xs[k], 1.0 - tails[k]);

    std::vector<double> w(n);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = std::cbrt(tails[n - 1 - k]);
        x[k] = xs[n - 1 - k];
    }
    inverse_tail_.emplace(std::move(w), std::move(x));
}

double UllmanDistribution::upper_tail(double x) const { return upper_tail_abs(p_, std::fabs(x)); }

double UllmanDistribution::cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x < 0.0 ? upper_tail_abs(p_, -x) : 1.0 - upper_tail_abs(p_, x);
}

double UllmanDistribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0, 1)");
    if (u == 0.5) return 0.0;
    const double target = u < 0.5 ? u : 1.0 - u;

    double x = std::clamp((*inverse_tail_)(std::cbrt(target)), 0.0, 1.0);
    for (int iter = 0; iter < 4; ++iter) {
        const double residual = upper_tail_abs(p_, x) - target;
        if (std::fabs(residual) <= 1e-16 + 1e-13 * target) break;
        const double f = density_abs(p_, x);
        if (!(f > 0.0) || !std::isfinite(f)) break;
        x = std::clamp(x + residual / f, 0.0, 1.0);
    }
    return u < 0.5 ? -x : x;
}

std::vector<double> UllmanDistribution::sample(std::size_t count, RandomStream& stream) const {
    std::vector<double> out(count);
    for (auto& v : out) v = quantile(stream.uniform());
    return out;
}

double UllmanDistribution::entropy() const {
    const double p = p_;
    auto integrand = [p](double x) {
        const double f = density_abs(p, x);
        return f > 0.0 ? f * std::log(f) : 0.0;
    };
    const QuadratureSpec spec{1e-12, 1e-11, 50, EndpointSingularity::inverse_sqrt_right};
    return -2.0 * integrate(integrand, 0.0, 1.0, spec);
}

double ullman_log_potential(double p, double x) {
    require_p(p, "ullman_log_potential");
    if (!(std::fabs(x) <= 1.0)) throw DomainError("ullman_log_potential: need |x| <= 1");
    // Either side of y = x, substitute |y - x| = e^(-s): the logarithm becomes
    // the linear factor s and the density's sqrt edge sits at the left end.
    // For p < 2 the cusp of f_p at y = 0 is passed to the quadrature as a breakpoint.
    const QuadratureSpec edge_spec{1e-12, 1e-10, 50, EndpointSingularity::inverse_sqrt_left};
    const QuadratureSpec plain_spec = edge_spec.with(EndpointSingularity::none);
    auto side = [&](double direction, double s0) {
        auto integrand = [&](double s) {
            return s * std::exp(-s) * density_abs(p, std::fabs(x + direction * std::exp(-s)));
        };
        const double s_end = std::max(s0, 0.0) + 40.0;
        const bool crosses_zero = direction * x < 0.0;
        const double s_cusp = crosses_zero ? -std::log(std::fabs(x)) : s0;
        if (s_cusp > s0 && s_cusp < s_end) {
            return integrate(integrand, s0, s_cusp, edge_spec) + integrate(integrand, s_cusp, s_end, plain_spec);
        }
        return integrate(integrand, s0, s_end, edge_spec);
    };
    double potential = 0.0;
    if (x < 1.0) potential += side(+1.0, -std::log(1.0 - x));
    if (x > -1.0) potential += side(-1.0, -std::log(1.0 + x));
    return potential;
}

double UllmanDistribution::log_energy() const {
    const double p = p_;
    auto integrand = [p](double x) { return density_abs(p, x) * ullman_log_potential(p, x); };
    const QuadratureSpec spec{1e-11, 1e-10, 50, EndpointSingularity::inverse_sqrt_right};
    return 2.0 * integrate(integrand, 0.0, 1.0, spec);
}

UllmanConstants UllmanDistribution::constants() const {
    UllmanConstants c{};
    c.p = p_;
    c.v_p = constant_v(p_);
    c.alpha_p = constant_alpha(p_);
    c.A_p = constant_A(p_);
    c.entropy = entropy();
    c.log_energy = log_energy();
    c.I_p = c.log_energy + c.v_p * c.alpha_p;
    return c;
}

//------------------------------------------------------------------------------
// Regularity diagnostics
//------------------------------------------------------------------------------

RegularityReport regularity_report(double p) {
    require_p(p, "regularity_report");
    RegularityReport report{kInf, -kInf, std::nan("")};

    constexpr int kBoundaryPoints = 200;
    for (int k = 0; k < kBoundaryPoints; ++k) {
        const double gap = 0.5 * std::pow(1e-8 / 0.5, static_cast<double>(k) / (kBoundaryPoints - 1));
        const double ratio = density_abs(p, 1.0 - gap) / std::sqrt(gap);
        report.boundary_ratio_min = std::min(report.boundary_ratio_min, ratio);
        report.boundary_ratio_max = std::max(report.boundary_ratio_max, ratio);
    }

    const double f0 = density_at_zero(p);
    if (!std::isfinite(f0)) return report;

    constexpr int kHolderPoints = 41;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int k = 0; k < kHolderPoints; ++k) {
        const double h = 1e-6 * std::pow(1e4, static_cast<double>(k) / (kHolderPoints - 1));
        const double diff = std::fabs(density_abs(p, h) - f0);
        if (!(diff > 0.0)) continue;
        const double lx = std::log(h);
        const double ly = std::log(diff);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used >= 2) {
        report.holder_exponent_at_0 = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    }
    return report;
}

}  // namespace schatten
