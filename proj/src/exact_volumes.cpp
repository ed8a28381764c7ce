#include "schatten/exact_volumes.hpp"

#include "schatten/errors.hpp"
#include "schatten/numerics.hpp"

#include <cmath>
#include <string>

namespace schatten {

void MatrixClassParams::validate() const {
    if (n < 1) throw DomainError("matrix size n must be >= 1");
    if (beta != 1 && beta != 2 && beta != 4) {
        throw DomainError("beta must be 1, 2 or 4, got " + std::to_string(beta));
    }
}

std::int64_t dim(const MatrixClassParams& params) {
    params.validate();
    const std::int64_t n = params.n;
    if (params.self_adjoint) return params.beta * n * (n - 1) / 2 + n;
    return params.beta * n * n;
}

namespace {

void require_n(int n) {
    if (n < 1) throw DomainError("n must be >= 1, got " + std::to_string(n));
}

std::int64_t sa_dim(int n, int beta) { return dim({n, beta, true}); }

}  // namespace

double log_c_n(int n, double beta) {
    require_n(n);
    if (!(beta > 0.0)) throw DomainError("log_c_n: beta must be positive");
    const double half = 0.5 * beta;
    double acc = -log_gamma(n + 1.0) + n * (log_gamma(half) - half * kLn2Pi);
    for (int k = 1; k <= n; ++k) {
        acc += half * k * kLn2Pi - log_gamma(half * k);
    }
    return acc;
}

double log_vol_euclidean(std::int64_t dim) {
    if (dim < 1) throw DomainError("log_vol_euclidean: dim must be >= 1");
    const double d = static_cast<double>(dim);
    return 0.5 * d * kLnPi - log_gamma(1.0 + 0.5 * d);
}

double log_vol_inf_full(int n, int beta) {
    MatrixClassParams{n, beta, false}.validate();
    const double half = 0.5 * beta;
    double acc = half * static_cast<double>(n) * n * kLnPi;
    for (int j = 0; j < n; ++j) acc += log_gamma(1.0 + j * half);
    for (int j = n; j < 2 * n; ++j) acc -= log_gamma(1.0 + j * half);
    return acc;
}

double selberg_cube_integral(int n, double gamma) {
    require_n(n);
    if (!(gamma > 0.0)) throw DomainError("selberg_cube_integral: gamma must be positive");
    // S_n(1, 1, gamma) on [0,1]^n, then the affine map to [-1,1]^n.
    double log_s = 0.0;
    for (int j = 0; j < n; ++j) {
        log_s += 2.0 * log_gamma(1.0 + j * gamma) + log_gamma(1.0 + (j + 1) * gamma) -
                 log_gamma(2.0 + (n + j - 1) * gamma) - log_gamma(1.0 + gamma);
    }
    return log_s + (n + gamma * n * (n - 1.0)) * kLn2;
}

double log_vol_inf_sa(int n, int beta) {
    MatrixClassParams{n, beta, true}.validate();
    return log_c_n(n, beta) + selberg_cube_integral(n, 0.5 * beta);
}

InfSaDiagnostic log_vol_inf_sa_diagnostic(int n, int beta) {
    MatrixClassParams{n, beta, true}.validate();
    const double g = 0.5 * beta;

    // Every factor except Gamma((j+1) g) / Gamma(j g) at j = 0.
    auto displayed_without_j0 = [g, beta](int m) {
        double acc = static_cast<double>(sa_dim(m, beta)) * kLn2 + 0.25 * beta * m * (m - 1.0) * kLn2Pi;
        for (int j = 0; j < m; ++j) {
            acc += 2.0 * log_gamma(1.0 + j * g) - log_gamma(2.0 + (m + j - 1) * g);
            if (j >= 1) acc += log_gamma((j + 1) * g) - log_gamma(j * g);
        }
        return acc;
    };

    InfSaDiagnostic out{};
    out.selberg_route = log_vol_inf_sa(n, beta);
    out.j0_reconciliation = kLn2 - displayed_without_j0(1);
    out.displayed_formula = displayed_without_j0(n) + out.j0_reconciliation;
    out.discrepancy = out.displayed_formula - out.selberg_route;
    return out;
}

double log_vol_lp_ball(int n, double p) {
    require_n(n);
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("log_vol_lp_ball: need 1 <= p < inf");
    return n * (kLn2 + log_gamma(1.0 + 1.0 / p)) - log_gamma(1.0 + n / p);
}

}  // namespace schatten
