#include "schatten/partition.hpp"

#include "schatten/errors.hpp"
#include "schatten/exact_volumes.hpp"
#include "schatten/numerics.hpp"
#include "schatten/parallel.hpp"
#include "schatten/ullman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace schatten {

void EnsembleParams::validate() const {
    if (n < 1) throw DomainError("n must be >= 1, got " + std::to_string(n));
    if (!std::isfinite(p) || p < 1.0) throw DomainError("p must be finite and >= 1, got " + std::to_string(p));
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

void EnsembleParams::validate_matrix() const {
    validate();
    if (beta != 1.0 && beta != 2.0 && beta != 4.0) {
        throw DomainError("volume routes need beta in {1, 2, 4}, got " + std::to_string(beta));
    }
}

double log_vandermonde(const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) acc += std::log(std::fabs(x[i] - x[j]));
    }
    return acc;
}

double log_Z_gaussian_exact(int n, double beta) {
    EnsembleParams{n, 2.0, beta}.validate();
    // x = y / sqrt(2 beta n) turns exp(-beta n sum x^2) into the Mehta weight
    // exp(-sum y^2 / 2), whose integral is (2 pi)^(n/2) prod_j Gamma(1 + j beta/2) / Gamma(1 + beta/2).
    const double half = 0.5 * beta;
    double acc = -(0.25 * beta * n * (n - 1.0) + 0.5 * n) * std::log(2.0 * beta * n) + 0.5 * n * kLn2Pi;
    const double lg_half = log_gamma(1.0 + half);
    for (int j = 1; j <= n; ++j) acc += log_gamma(1.0 + j * half) - lg_half;
    return acc;
}

double log_generalized_gaussian_normalizer(double p, double a) {
    return kLn2 + log_gamma(1.0 + 1.0 / p) - std::log(a) / p;
}

namespace {

double confinement_rate(const EnsembleParams& params) {
    return 0.5 * params.beta * params.n * constant_v(params.p);
}

}  // namespace

double quadrature_radius(const EnsembleParams& params) {
    params.validate();
    constexpr double eps = 1e-14;
    const double n = params.n;
    const double r = std::pow(2.0 * (std::log(1.0 / eps) + n * std::log(n)) /
                                  (params.beta * n * constant_v(params.p)),
                              1.0 / params.p);
    return std::max(2.0, r);
}

double log_Z_quadrature(const EnsembleParams& params) {
    params.validate();
    if (params.n > 3) throw DomainError("log_Z_quadrature: n must be <= 3");
    const int n = params.n;
    const double beta = params.beta;
    const double p = params.p;
    const double a = confinement_rate(params);
    const double radius = quadrature_radius(params);
    const QuadratureSpec spec{1e-18, 1e-11, 50};

    auto weight = [a, p](double x) { return std::exp(-a * std::pow(std::fabs(x), p)); };
    // Integrate over [lo, hi], splitting at the kink of |x|^p.
    auto integrate_split = [&spec](const Integrand& f, double lo, double hi) {
        if (!(hi > lo)) return 0.0;
        if (lo < 0.0 && hi > 0.0) return integrate(f, lo, 0.0, spec) + integrate(f, 0.0, hi, spec);
        return integrate(f, lo, hi, spec);
    };

    // Ordered region x_1 < ... < x_n, times n! for the symmetric integrand.
    double value = 0.0;
    if (n == 1) {
        value = integrate_split(weight, -radius, radius);
    } else if (n == 2) {
        auto outer = [&](double x2) {
            auto inner = [&](double x1) { return std::pow(x2 - x1, beta) * weight(x1); };
            return weight(x2) * integrate_split(inner, -radius, x2);
        };
        value = 2.0 * integrate_split(outer, -radius, radius);
    } else {
        auto outer = [&](double x3) {
            auto middle = [&](double x2) {
                auto inner = [&](double x1) {
                    return std::pow((x2 - x1) * (x3 - x1), beta) * weight(x1);
                };
                return std::pow(x3 - x2, beta) * weight(x2) * integrate_split(inner, -radius, x2);
            };
            return weight(x3) * integrate_split(middle, -radius, x3);
        };
        value = 6.0 * integrate_split(outer, -radius, radius);
    }
    return std::log(value);
}

//------------------------------------------------------------------------------
// Monte Carlo kernels
//------------------------------------------------------------------------------

namespace {

// Running log-weight moments, rescaled to the running maximum.
struct WeightSums {
    double max = -kInf;
    double sum = 0.0;     // sum exp(l - max)
    double sum_sq = 0.0;  // sum exp(2 (l - max))
    std::int64_t count = 0;

    void add(double l) {
        ++count;
        if (l == -kInf) return;
        if (l > max) {
            const double scale = std::exp(max - l);
            sum *= scale;
            sum_sq *= scale * scale;
            max = l;
        }
        const double w = std::exp(l - max);
        sum += w;
        sum_sq += w * w;
    }

    void merge(const WeightSums& other) {
        count += other.count;
        if (other.max == -kInf) return;
        if (other.max > max) {
            const double scale = std::exp(max - other.max);
            sum = sum * scale + other.sum;
            sum_sq = sum_sq * scale * scale + other.sum_sq;
            max = other.max;
        } else {
            const double scale = std::exp(other.max - max);
            sum += other.sum * scale;
            sum_sq += other.sum_sq * scale * scale;
        }
    }
};

using LogWeightDraw = std::function<double(RandomStream&)>;

// Draws sample_count log-weights in fixed chunks, chunk k on stream.substream(k),
// and merges the chunks in index order so the result ignores the thread count.
McEstimate estimate_log_mean(const LogWeightDraw& draw, std::int64_t sample_count,
                             const RandomStream& stream, double log_offset) {
    if (sample_count < 1000) throw DomainError("Monte Carlo estimates need at least 1000 samples");
    const std::int64_t chunks = (sample_count + kChunkSize - 1) / kChunkSize;
    std::vector<WeightSums> partial(static_cast<std::size_t>(chunks));
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t k) {
        RandomStream local = stream.substream(k);
        const std::int64_t begin = static_cast<std::int64_t>(k) * kChunkSize;
        const std::int64_t end = std::min(sample_count, begin + kChunkSize);
        WeightSums sums;
        for (std::int64_t i = begin; i < end; ++i) sums.add(draw(local));
        partial[k] = sums;
    });

    WeightSums total;
    for (const auto& part : partial) total.merge(part);

    const double n = static_cast<double>(total.count);
    McEstimate est;
    est.sample_count = sample_count;
    est.seed = stream.seed();
    if (total.max == -kInf) {
        throw UnreliableEstimate("all importance weights vanish", -kInf, 0.0);
    }
    const double mean = total.sum / n;
    est.log_value = log_offset + total.max + std::log(mean);
    const double variance = std::max(0.0, (total.sum_sq - total.sum * total.sum / n) / (n - 1.0));
    est.std_error_log = std::sqrt(variance) / (mean * std::sqrt(n));
    est.effective_sample_size = total.sum * total.sum / total.sum_sq;
    if (est.effective_sample_size < 10.0) {
        throw UnreliableEstimate("effective sample size " + std::to_string(est.effective_sample_size) +
                                     " below 10",
                                 est.log_value, est.effective_sample_size);
    }
    return est;
}

// |X| = (G / a)^(1/p), G ~ Gamma(1/p), has density proportional to exp(-a |x|^p).
double draw_generalized_gaussian(RandomStream& rng, double p, double a) {
    return rng.sign() * std::pow(rng.gamma(1.0 / p) / a, 1.0 / p);
}

}  // namespace

McEstimate log_Z_importance(const EnsembleParams& params, std::int64_t sample_count,
                            const RandomStream& stream, Proposal proposal) {
    params.validate();
    const int n = params.n;
    const double p = params.p;
    const double beta = params.beta;
    const double a = confinement_rate(params);
    const double log_norm = log_generalized_gaussian_normalizer(p, a);

    if (proposal == Proposal::generalized_gaussian) {
        LogWeightDraw draw = [=](RandomStream& rng) {
            std::vector<double> x(n);
            for (auto& xi : x) xi = draw_generalized_gaussian(rng, p, a);
            return beta * log_vandermonde(x);
        };
        return estimate_log_mean(draw, sample_count, stream, n * log_norm);
    }

    constexpr double kScale = 1.25;
    const UllmanDistribution ullman(p);
    LogWeightDraw draw = [&](RandomStream& rng) {
        std::vector<double> x(n);
        double log_target_over_q = 0.0;
        for (auto& xi : x) {
            xi = rng.uniform() < 0.5 ? kScale * ullman.quantile(rng.uniform())
                                     : draw_generalized_gaussian(rng, p, a);
            const double confinement = -a * std::pow(std::fabs(xi), p);
            const double q = 0.5 * ullman.density(xi / kScale) / kScale + 0.5 * std::exp(confinement - log_norm);
            log_target_over_q += confinement - std::log(q);
        }
        return beta * log_vandermonde(x) + log_target_over_q;
    };
    return estimate_log_mean(draw, sample_count, stream, 0.0);
}

std::vector<double> sample_lp_ball(int n, double p, RandomStream& stream) {
    if (n < 1) throw DomainError("sample_lp_ball: n must be >= 1");
    if (!std::isfinite(p) || p < 1.0) throw DomainError("sample_lp_ball: need 1 <= p < inf");
    // Y_i with density ~ exp(-|y|^p) and Z ~ Exp(1): Y / (||Y||_p^p + Z)^(1/p) is uniform on the ball.
    std::vector<double> x(n);
    double radius_p = stream.exponential();
    for (auto& xi : x) {
        const double g = stream.gamma(1.0 / p);
        radius_p += g;
        xi = stream.sign() * std::pow(g, 1.0 / p);
    }
    const double scale = std::pow(radius_p, -1.0 / p);
    for (auto& xi : x) xi *= scale;
    return x;
}

McEstimate log_vol_sa_via_lp_mc(const EnsembleParams& params, std::int64_t sample_count,
                                const RandomStream& stream) {
    params.validate_matrix();
    const int n = params.n;
    const double p = params.p;
    const double beta = params.beta;
    LogWeightDraw draw = [=](RandomStream& rng) { return beta * log_vandermonde(sample_lp_ball(n, p, rng)); };
    return estimate_log_mean(draw, sample_count, stream, log_c_n(n, beta) + log_vol_lp_ball(n, p));
}

double log_vol_sa_via_Z(const EnsembleParams& params, double log_Z) {
    params.validate_matrix();
    const double d = static_cast<double>(dim({params.n, static_cast<int>(params.beta), true}));
    const double ratio = d / params.p;
    return log_c_n(params.n, params.beta) - log_gamma(1.0 + ratio) +
           ratio * std::log(params.n * params.beta * constant_v(params.p) / 2.0) + log_Z;
}

McEstimate log_cube_integral_mc(int n, double gamma, std::int64_t sample_count, const RandomStream& stream) {
    if (n < 1) throw DomainError("log_cube_integral_mc: n must be >= 1");
    if (!(gamma > 0.0)) throw DomainError("log_cube_integral_mc: gamma must be positive");
    LogWeightDraw draw = [=](RandomStream& rng) {
        std::vector<double> x(n);
        for (auto& xi : x) xi = rng.uniform(-1.0, 1.0);
        return 2.0 * gamma * log_vandermonde(x);
    };
    return estimate_log_mean(draw, sample_count, stream, n * kLn2);
}

}  // namespace schatten
