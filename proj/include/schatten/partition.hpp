#pragma once

#include "schatten/random.hpp"

#include <cstdint>
#include <vector>

namespace schatten {

// Z_{n,p,beta} = int_{R^n} prod_{i<j} |x_i - x_j|^beta exp(-(beta/2) n v_p sum |x_i|^p) dx
// is the partition function of the beta-ensemble with potential v_p |x|^p.
// Everything here works with ln Z.

struct EnsembleParams {
    int n = 1;
    double p = 2.0;
    double beta = 2.0;

    /// n >= 1, finite p >= 1, beta > 0.
    void validate() const;
    /// Additionally beta in {1, 2, 4}, the values with a matrix model.
    void validate_matrix() const;
};

struct McEstimate {
    double log_value = 0.0;
    /// Delta-method standard error of log_value.
    double std_error_log = 0.0;
    std::int64_t sample_count = 0;
    std::uint64_t seed = 0;
    double effective_sample_size = 0.0;
};

/// Where importance samples for Z come from.
enum class Proposal {
    /// Independent coordinates with density proportional to the confinement
    /// factor exp(-(beta/2) n v_p |x|^p); weights reduce to the Vandermonde term.
    generalized_gaussian,
    /// Equal mixture of 1.25 x Ullman draws and the generalized Gaussian.
    /// Slower (density by quadrature); kept for variance comparison.
    ullman_mixture,
};

/// Samples per independent random substream in the Monte Carlo kernels.
inline constexpr std::int64_t kChunkSize = 8192;
/// Above this n the Vandermonde weights degenerate quickly.
inline constexpr int kAdvisoryMaxN = 64;

/// ln Z_{n,2,beta} from Mehta's integral.
double log_Z_gaussian_exact(int n, double beta);

/// ln of int_R exp(-a |x|^p) dx = 2 Gamma(1 + 1/p) a^(-1/p).
double log_generalized_gaussian_normalizer(double p, double a);

/// ln Z by nested adaptive quadrature over a truncated box; n <= 3.
double log_Z_quadrature(const EnsembleParams& params);

/// The truncation radius used by log_Z_quadrature.
double quadrature_radius(const EnsembleParams& params);

/// Importance-sampling estimate of ln Z. Deterministic in (stream, sample_count).
/// Throws UnreliableEstimate if the effective sample size drops below 10.
McEstimate log_Z_importance(const EnsembleParams& params, std::int64_t sample_count,
                            const RandomStream& stream,
                            Proposal proposal = Proposal::generalized_gaussian);

/// One point uniformly distributed in the unit l_p ball of R^n.
std::vector<double> sample_lp_ball(int n, double p, RandomStream& stream);

/// ln vol of the self-adjoint Schatten p-ball via uniform l_p-ball sampling of the eigenvalues.
McEstimate log_vol_sa_via_lp_mc(const EnsembleParams& params, std::int64_t sample_count,
                                const RandomStream& stream);

/// ln vol of the self-adjoint Schatten p-ball from any ln Z.
double log_vol_sa_via_Z(const EnsembleParams& params, double log_Z);

/// ln int_{[-1,1]^n} prod_{i<j} |x_i - x_j|^(2 gamma) dx by uniform sampling of the cube.
McEstimate log_cube_integral_mc(int n, double gamma, std::int64_t sample_count,
                                const RandomStream& stream);

/// sum_{i<j} ln|x_i - x_j|; -inf on coincident points.
double log_vandermonde(const std::vector<double>& x);

}  // namespace schatten
