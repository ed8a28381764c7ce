#include "schatten/equilibrium.hpp"

#include "schatten/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace schatten {

ParticleConfig ParticleConfig::make(std::vector<double> points, double p) {
    if (points.empty()) throw DomainError("ParticleConfig: need at least one point");
    if (!std::isfinite(p) || p < 1.0) throw DomainError("ParticleConfig: p must be finite and >= 1");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw DomainError("ParticleConfig: non-finite point");
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw DomainError("ParticleConfig: points must be strictly increasing");
        }
    }
    return ParticleConfig{std::move(points), p};
}

namespace {

struct EnergyEval {
    double value;
    double magnitude;  // sum of |terms|, for roundoff estimates
};

EnergyEval energy_eval(std::span<const double> x, double p, double field) {
    const std::size_t n = x.size();
    double interaction = 0.0;
    double magnitude = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = std::fabs(x[i] - x[j]);
            if (gap == 0.0) return {kInf, kInf};
            const double l = std::log(gap);
            interaction -= l;
            magnitude += std::fabs(l);
        }
    }
    double confinement = 0.0;
    for (double xi : x) confinement += std::pow(std::fabs(xi), p);
    confinement *= 0.5 * static_cast<double>(n) * field;
    return {interaction + confinement, magnitude + confinement};
}

std::vector<double> gradient_impl(std::span<const double> x, double p, double field) {
    const std::size_t n = x.size();
    const double coeff = 0.5 * static_cast<double>(n) * field * p;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = coeff * std::pow(std::fabs(x[i]), p - 1.0) * (x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            if (d == 0.0) throw DomainError("gradient: coincident points");
            const double inv = 1.0 / d;
            g[i] -= inv;
            g[j] += inv;
        }
    }
    return g;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::fabs(e));
    return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Diagonal of the Hessian. For p < 2 the confinement term blows up at 0; a
// particle sitting exactly there gets +inf and is frozen by the scaling.
std::vector<double> hessian_diagonal(const std::vector<double>& x, double p, double field) {
    const std::size_t n = x.size();
    const double coeff = 0.5 * static_cast<double>(n) * field * p * (p - 1.0);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = std::fabs(x[i]);
        h[i] = (ax == 0.0 && p < 2.0) ? kInf : coeff * std::pow(ax, p - 2.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            const double w = 1.0 / (d * d);
            h[i] += w;
            h[j] += w;
        }
    }
    return h;
}

bool strictly_increasing(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) return false;
    }
    return true;
}

// Line search along direction d from x. Accepts on the Armijo condition, or,
// once the energy change is below its rounding level, on the approximate
// Wolfe test g(x + t d) . d <= (2c - 1) g(x) . d.
struct LineSearchOutcome {
    bool accepted = false;
    double step = 0.0;
    std::vector<double> x;
    EnergyEval e{};
    std::vector<double> g;
};

LineSearchOutcome line_search(const std::vector<double>& x, const EnergyEval& e0, const std::vector<double>& g0,
                              const std::vector<double>& d, double step, double p, double field,
                              const OptimizeOptions& opt) {
    const double slope = dot(g0, d);
    LineSearchOutcome out;
    if (!(slope < 0.0)) return out;
    std::vector<double> trial(x.size());
    for (int k = 0; k < 80 && step > 0.0; ++k, step *= opt.backtrack) {
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * d[i];
        if (!strictly_increasing(trial)) continue;
        const EnergyEval e = energy_eval(trial, p, field);
        if (!std::isfinite(e.value)) continue;
        const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (e0.magnitude + e.magnitude);
        bool ok = e.value <= e0.value + opt.armijo * step * slope;
        std::vector<double> g;
        if (!ok && std::fabs(e.value - e0.value) <= roundoff) {
            g = gradient_impl(trial, p, field);
            ok = dot(g, d) <= (2.0 * opt.armijo - 1.0) * slope;
        }
        if (ok) {
            out.accepted = true;
            out.step = step;
            out.x = trial;
            out.e = e;
            out.g = g.empty() ? gradient_impl(trial, p, field) : std::move(g);
            return out;
        }
    }
    return out;
}

std::vector<double> newton_direction(const std::vector<double>& x, const std::vector<double>& g, double p,
                                     double field) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(n, n);
    const double coeff = 0.5 * static_cast<double>(n) * field * p * (p - 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ax = std::fabs(x[i]);
        hessian(i, i) = (ax == 0.0 && p < 2.0) ? 1e30 : coeff * std::pow(ax, p - 2.0);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = x[i] - x[j];
            const double h = 1.0 / (d * d);
            hessian(i, i) += h;
            hessian(j, j) += h;
            hessian(i, j) -= h;
            hessian(j, i) -= h;
        }
    }
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i) = -g[i];
    const Eigen::VectorXd step = hessian.ldlt().solve(rhs);
    return std::vector<double>(step.data(), step.data() + n);
}

}  // namespace

double energy(std::span<const double> x, double p) {
    if (!std::isfinite(p) || p < 1.0) throw DomainError("energy: p must be finite and >= 1");
    return energy_eval(x, p, constant_v(p)).value;
}

double energy(const ParticleConfig& config) { return energy(config.points, config.p); }

std::vector<double> gradient(std::span<const double> x, double p) {
    if (!std::isfinite(p) || p <= 1.0) throw DomainError("gradient: need finite p > 1");
    return gradient_impl(x, p, constant_v(p));
}

std::vector<double> gradient(const ParticleConfig& config) { return gradient(config.points, config.p); }

OptimizeResult minimize(int n, double p, const OptimizeOptions& opt) {
    if (n < 2) throw DomainError("minimize: need n >= 2");
    if (!std::isfinite(p) || p <= 1.0) throw DomainError("minimize: need finite p > 1");
    if (!(opt.tol > 0.0)) throw DomainError("minimize: tol must be positive");

    const double field = constant_v(p);
    const UllmanDistribution ullman(p);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = ullman.quantile((i + 0.5) / n);

    EnergyEval e = energy_eval(x, p, field);
    std::vector<double> g = gradient_impl(x, p, field);
    OptimizeResult result;
    if (opt.record_history) result.energy_history.push_back(e.value);

    // Descent along -D^{-1} g with D the Hessian diagonal. Without the scaling
    // the steps are set by the stiffest coordinate, which for p < 2 and odd n
    // is the particle at 0, and the rest of the configuration stalls.
    constexpr double kMaxStep = 4.0;
    double step = 1.0;
    std::vector<double> h = hessian_diagonal(x, p, field);
    int iter = 0;
    for (; iter < opt.max_iter && inf_norm(g) > opt.tol; ++iter) {
        std::vector<double> d(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i] / h[i];
        LineSearchOutcome ls = line_search(x, e, g, d, step, p, field, opt);
        if (!ls.accepted) break;
        // Barzilai-Borwein step in the scaled metric: s.y / y.D^{-1}y with
        // s = x_new - x, y = g_new - g.
        double sy = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double si = ls.x[i] - x[i];
            const double yi = ls.g[i] - g[i];
            sy += si * yi;
            yy += yi * yi / h[i];
        }
        x = std::move(ls.x);
        e = ls.e;
        g = std::move(ls.g);
        h = hessian_diagonal(x, p, field);
        step = (sy > 0.0 && yy > 0.0) ? std::min(sy / yy, kMaxStep) : std::min(2.0 * ls.step, kMaxStep);
        if (opt.record_history) result.energy_history.push_back(e.value);
    }

    if (opt.newton_polish) {
        for (int k = 0; k < 50 && iter < opt.max_iter && inf_norm(g) > opt.tol; ++k, ++iter) {
            LineSearchOutcome ls = line_search(x, e, g, newton_direction(x, g, p, field), 1.0, p, field, opt);
            if (!ls.accepted) break;
            x = std::move(ls.x);
            e = ls.e;
            g = std::move(ls.g);
            if (opt.record_history) result.energy_history.push_back(e.value);
        }
    }

    result.gradient_inf_norm = inf_norm(g);
    result.converged = result.gradient_inf_norm <= opt.tol;
    result.iterations = iter;
    result.energy = e.value;
    result.config = ParticleConfig{std::move(x), p};
    return result;
}

double empirical_kolmogorov_distance(std::span<const double> sorted_points, const UllmanDistribution& dist) {
    const double n = static_cast<double>(sorted_points.size());
    if (sorted_points.empty()) throw DomainError("empirical_kolmogorov_distance: empty configuration");
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double f = dist.cdf(sorted_points[i]);
        worst = std::max({worst, (i + 1) / n - f, f - i / n});
    }
    return worst;
}

}  // namespace schatten
