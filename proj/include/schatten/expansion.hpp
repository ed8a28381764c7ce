#pragma once

#include "schatten/ullman.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace schatten {

// Large-n expansions of ln vol, ln Z and ln c_n, kept term by term. None of
// them includes its additive constant, which is only known to exist.

enum class Order { n2logn, n2, nlogn, n, logn, constant };

/// "n2logn", "n2", "nlogn", "n", "logn", "const".
std::string order_label(Order order);
/// Inverse of order_label; throws DomainError on anything else.
Order parse_order(const std::string& label);

struct ExpansionValue {
    /// Coefficient times the evaluated order, one entry per displayed term.
    std::map<Order, double> terms;
    double partial_sum = 0.0;
    /// The unknown constant (or o(n) remainder) is not included.
    bool has_unknown_constant = true;

    void add(Order order, double value);
};

/// C(beta) = (1 - beta/2) ln(beta/2) - (beta/2) ln 2pi + beta/2 + ln Gamma(beta/2).
double C_beta(double beta);

/// ln vol of the self-adjoint Schatten p-ball through order n. p >= 3/2, beta in {1, 2, 4}.
ExpansionValue expansion_logvol_main1(int n, double p, int beta, const UllmanConstants& constants);
/// ln vol at beta = 2 through order ln n. p >= 1.
ExpansionValue expansion_logvol_main2(int n, double p);
/// ln Z_{n,p,beta} through order n. p >= 3/2, beta > 0.
ExpansionValue expansion_logZ_LS(int n, double p, double beta, const UllmanConstants& constants);
/// ln Z_{n,p,2} through order ln n. p >= 1.
ExpansionValue expansion_logZ_CKM(int n, double p);
/// ln c_n through order ln n. beta in {1, 2, 4}.
ExpansionValue expansion_log_cn(int n, int beta);

struct ResidualSeries {
    std::vector<int> n_grid;
    std::vector<double> residuals;   // reference - partial_sum
    std::vector<double> normalized;  // residual / n for o(n), residual for o(1)
    /// Successive differences of normalized; differences[0] is NaN.
    std::vector<double> differences;
    Order first_omitted = Order::n;
    double threshold = 0.05;
    /// o(n): |normalized| strictly decreasing over the tail half of the grid
    /// and ending below threshold. o(1): the same test on |differences|.
    bool verdict = false;
    /// o(1) only: mean and range of normalized over the tail half.
    double constant_estimate = 0.0;
    double constant_spread = 0.0;
};

/// Compares reference values against an expansion on a common grid.
/// first_omitted must be Order::n or Order::constant.
ResidualSeries residual_series(const std::map<int, double>& reference,
                               const std::function<ExpansionValue(int)>& expansion,
                               Order first_omitted, double threshold = 0.05);

}  // namespace schatten
