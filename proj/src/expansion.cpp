#include "schatten/expansion.hpp"

#include "schatten/errors.hpp"
#include "schatten/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schatten {

std::string order_label(Order order) {
    switch (order) {
        case Order::n2logn: return "n2logn";
        case Order::n2: return "n2";
        case Order::nlogn: return "nlogn";
        case Order::n: return "n";
        case Order::logn: return "logn";
        case Order::constant: return "const";
    }
    return "?";
}

Order parse_order(const std::string& label) {
    for (Order o : {Order::n2logn, Order::n2, Order::nlogn, Order::n, Order::logn, Order::constant}) {
        if (order_label(o) == label) return o;
    }
    throw DomainError("unknown expansion order '" + label + "'");
}

void ExpansionValue::add(Order order, double value) {
    terms[order] += value;
    partial_sum = 0.0;
    for (const auto& [o, v] : terms) partial_sum += v;
}

double C_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("C_beta: beta must be positive");
    const double h = 0.5 * beta;
    return (1.0 - h) * std::log(h) - h * kLn2Pi + h + log_gamma(h);
}

namespace {

void require_n(int n) {
    if (n < 1) throw DomainError("expansion: n must be >= 1");
}

void require_p(double p, double min, const char* who) {
    if (!std::isfinite(p) || p < min) {
        throw DomainError(std::string(who) + ": need finite p >= " + (min == 1.0 ? "1" : "3/2"));
    }
}

void require_matrix_beta(int beta) {
    if (beta != 1 && beta != 2 && beta != 4) throw DomainError("expansion: beta must be 1, 2 or 4");
}

}  // namespace

ExpansionValue expansion_logvol_main1(int n, double p, int beta, const UllmanConstants& c) {
    require_n(n);
    require_p(p, 1.5, "expansion_logvol_main1");
    require_matrix_beta(beta);
    const double h = 0.5 * beta;
    const double nn = n;
    const double ln_n = std::log(nn);
    const double ln_A = std::log(c.A_p);
    ExpansionValue out;
    out.add(Order::n2logn, -h * (0.5 + 1.0 / p) * nn * nn * ln_n);
    out.add(Order::n2, h * (0.5 * std::log(4.0 * kPi / beta) + 0.75 + ln_A) * nn * nn);
    out.add(Order::nlogn, -(1.0 - h) * (0.5 + 1.0 / p) * nn * ln_n);
    out.add(Order::n, (1.0 - h) *
                          (0.5 * std::log(4.0 / (beta * kPi)) + 0.5 + 0.5 / p + ln_A + c.entropy) * nn);
    return out;
}

ExpansionValue expansion_logvol_main2(int n, double p) {
    require_n(n);
    require_p(p, 1.0, "expansion_logvol_main2");
    const double nn = n;
    const double ln_n = std::log(nn);
    ExpansionValue out;
    out.add(Order::n2logn, -(0.5 + 1.0 / p) * nn * nn * ln_n);
    out.add(Order::n2, (0.5 * kLn2Pi + 0.75 + std::log(constant_A(p))) * nn * nn);
    out.add(Order::logn, -ln_n);
    return out;
}

ExpansionValue expansion_logZ_LS(int n, double p, double beta, const UllmanConstants& c) {
    require_n(n);
    require_p(p, 1.5, "expansion_logZ_LS");
    const double h = 0.5 * beta;
    const double nn = n;
    ExpansionValue out;
    out.add(Order::n2, -h * nn * nn * c.I_p);
    out.add(Order::nlogn, h * nn * std::log(nn));
    out.add(Order::n, (-C_beta(beta) + (1.0 - h) * c.entropy) * nn);
    return out;
}

ExpansionValue expansion_logZ_CKM(int n, double p) {
    require_n(n);
    require_p(p, 1.0, "expansion_logZ_CKM");
    const double nn = n;
    const double ln_n = std::log(nn);
    const double I_p = kLn2 + 1.5 / p;
    ExpansionValue out;
    out.add(Order::n2, -nn * nn * I_p);
    out.add(Order::nlogn, nn * ln_n);
    out.add(Order::n, (kLn2Pi - 1.0) * nn);
    out.add(Order::logn, 5.0 / 12.0 * ln_n);
    return out;
}

ExpansionValue expansion_log_cn(int n, int beta) {
    require_n(n);
    require_matrix_beta(beta);
    const double b = beta;
    const double h = 0.5 * b;
    const double nn = n;
    const double ln_n = std::log(nn);
    ExpansionValue out;
    out.add(Order::n2logn, -0.25 * b * nn * nn * ln_n);
    out.add(Order::n2, h * (0.5 * std::log(4.0 * kPi / b) + 0.75) * nn * nn);
    out.add(Order::nlogn, -0.5 * (1.0 + h) * nn * ln_n);
    out.add(Order::n, (0.5 * (1.0 - h) * std::log(b) - 0.5 * (1.0 + h) * (kLnPi - 1.0) - kLn2 + log_gamma(h)) * nn);
    out.add(Order::logn, -(3.0 + h + 2.0 / b) / 12.0 * ln_n);
    return out;
}

ResidualSeries residual_series(const std::map<int, double>& reference,
                               const std::function<ExpansionValue(int)>& expansion, Order first_omitted,
                               double threshold) {
    if (reference.empty()) throw DomainError("residual_series: empty grid");
    if (first_omitted != Order::n && first_omitted != Order::constant) {
        throw DomainError("residual_series: first omitted order must be n or const");
    }
    ResidualSeries out;
    out.first_omitted = first_omitted;
    out.threshold = threshold;
    for (const auto& [n, value] : reference) {
        if (n < 1) throw DomainError("residual_series: grid entries must be >= 1");
        const double r = value - expansion(n).partial_sum;
        out.n_grid.push_back(n);
        out.residuals.push_back(r);
        out.normalized.push_back(first_omitted == Order::n ? r / n : r);
    }
    const std::size_t m = out.n_grid.size();
    out.differences.assign(m, std::nan(""));
    for (std::size_t i = 1; i < m; ++i) out.differences[i] = out.normalized[i] - out.normalized[i - 1];

    const std::vector<double>& watched = first_omitted == Order::n ? out.normalized : out.differences;
    const std::size_t first_valid = first_omitted == Order::n ? 0 : 1;
    const std::size_t tail = std::max(first_valid, m / 2);
    bool ok = m > first_valid;
    for (std::size_t i = tail; ok && i < m; ++i) {
        if (!std::isfinite(watched[i])) ok = false;
        if (i > tail && !(std::fabs(watched[i]) < std::fabs(watched[i - 1]))) ok = false;
    }
    out.verdict = ok && std::fabs(watched[m - 1]) < threshold;

    if (first_omitted == Order::constant) {
        const std::size_t start = m / 2;
        double sum = 0.0, lo = out.normalized[start], hi = lo;
        for (std::size_t i = start; i < m; ++i) {
            sum += out.normalized[i];
            lo = std::min(lo, out.normalized[i]);
            hi = std::max(hi, out.normalized[i]);
        }
        out.constant_estimate = sum / static_cast<double>(m - start);
        out.constant_spread = hi - lo;
    }
    return out;
}

}  // namespace schatten
