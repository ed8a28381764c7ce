#pragma once

#include "schatten/ullman.hpp"

#include <span>
#include <vector>

namespace schatten {

// Discrete log-energy of n particles in the field V(x) = v_p |x|^p:
//
//     E(x) = -sum_{i<j} ln|x_i - x_j| + (n/2) v_p sum_i |x_i|^p,
//
// the exponent of the beta-ensemble density divided by beta. Its minimisers
// (weighted Fekete points) approximate the Ullman distribution.

/// Strictly increasing, finite particle positions.
struct ParticleConfig {
    std::vector<double> points;
    double p = 2.0;

    /// Validates ordering and finiteness; throws DomainError.
    static ParticleConfig make(std::vector<double> points, double p);
    std::size_t size() const noexcept { return points.size(); }
};

struct OptimizeOptions {
    double tol = 1e-8;
    int max_iter = 200000;
    double armijo = 1e-4;
    double backtrack = 0.5;
    /// Finish with damped Newton steps on the explicit Hessian.
    bool newton_polish = false;
    /// Keep the energy of every accepted iterate in OptimizeResult::energy_history.
    bool record_history = false;
};

struct OptimizeResult {
    ParticleConfig config;
    double energy = 0.0;
    double gradient_inf_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> energy_history;
};

/// +inf if two points coincide.
double energy(std::span<const double> x, double p);
double energy(const ParticleConfig& config);

/// dE/dx_i. Requires p > 1; throws DomainError on coincident points.
std::vector<double> gradient(std::span<const double> x, double p);
std::vector<double> gradient(const ParticleConfig& config);

/// Gradient descent with Armijo backtracking from the Ullman quantiles
/// x_i = Q((i - 1/2) / n), scaled by the Hessian diagonal. Steps that would
/// reorder or merge particles are rejected. Non-convergence is reported through converged = false.
OptimizeResult minimize(int n, double p, const OptimizeOptions& options = {});

/// sup_x |F_emp(x) - F(x)|, evaluated at the jump points.
double empirical_kolmogorov_distance(std::span<const double> sorted_points, const UllmanDistribution& dist);

}  // namespace schatten
