#pragma once

#include <cstdint>

namespace schatten {

/// n x n matrices over R (beta = 1), C (beta = 2) or H (beta = 4).
struct MatrixClassParams {
    int n = 1;
    int beta = 1;
    bool self_adjoint = true;

    /// Throws DomainError unless n >= 1 and beta is 1, 2 or 4.
    void validate() const;
};

/// Real dimension: beta n(n-1)/2 + n for self-adjoint matrices, beta n^2 otherwise.
std::int64_t dim(const MatrixClassParams& params);

/// ln c_n, the Weyl integration constant linking matrix volume to
/// eigenvalue integrals. Any beta > 0 is accepted.
double log_c_n(int n, double beta);

/// ln vol of the Euclidean unit ball in R^dim.
double log_vol_euclidean(std::int64_t dim);

/// ln vol of the operator-norm unit ball of all n x n matrices (p = inf).
double log_vol_inf_full(int n, int beta);

/// ln int_{[-1,1]^n} prod_{i<j} |x_i - x_j|^(2 gamma) dx, Selberg closed form.
double selberg_cube_integral(int n, double gamma);

/// ln vol of the self-adjoint operator-norm ball, ln c_n + Selberg integral.
double log_vol_inf_sa(int n, int beta);

/// The displayed product formula for the self-adjoint p = inf volume,
/// evaluated with its j = 0 factor Gamma(beta/2)/Gamma(0) replaced by the
/// constant that makes n = 1 give ln 2. Diagnostic only.
struct InfSaDiagnostic {
    double selberg_route;
    double displayed_formula;
    double j0_reconciliation;  // ln of the substituted j = 0 factor
    double discrepancy;        // displayed_formula - selberg_route
};
InfSaDiagnostic log_vol_inf_sa_diagnostic(int n, int beta);

/// ln vol of the unit l_p ball in R^n, 1 <= p < inf.
double log_vol_lp_ball(int n, double p);

}  // namespace schatten
