#include "schatten/numerics.hpp"

#include "schatten/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace schatten {

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: argument must be finite and positive, got " + std::to_string(x));
    }
    // lgamma_r does not touch the global signgam, unlike std::lgamma.
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("log_sum_exp: empty input");
    }
    const double m = *std::max_element(values.begin(), values.end());
    if (m == -kInf) return -kInf;
    if (!std::isfinite(m)) {
        throw DomainError("log_sum_exp: non-finite maximum");
    }
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - m);
    return m + std::log(sum);
}

double log_mean_exp(std::span<const double> values) {
    return log_sum_exp(values) - std::log(static_cast<double>(values.size()));
}

//------------------------------------------------------------------------------
// LogNumber
//------------------------------------------------------------------------------

LogNumber LogNumber::from_log(double log_abs, int sign) {
    LogNumber out;
    if (sign == 0 || log_abs == -kInf) return out;
    out.sign_ = sign > 0 ? 1 : -1;
    out.log_abs_ = log_abs;
    return out;
}

LogNumber LogNumber::from_double(double value) {
    if (value == 0.0) return {};
    return from_log(std::log(std::fabs(value)), value > 0 ? 1 : -1);
}

double LogNumber::to_double() const noexcept {
    return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_);
}

LogNumber LogNumber::operator-() const noexcept {
    LogNumber out = *this;
    out.sign_ = -sign_;
    return out;
}

LogNumber operator*(const LogNumber& a, const LogNumber& b) noexcept {
    LogNumber out;
    out.sign_ = a.sign_ * b.sign_;
    out.log_abs_ = out.sign_ == 0 ? 0.0 : a.log_abs_ + b.log_abs_;
    return out;
}

LogNumber operator/(const LogNumber& a, const LogNumber& b) {
    if (b.sign_ == 0) throw DomainError("LogNumber: division by zero");
    LogNumber out;
    out.sign_ = a.sign_ * b.sign_;
    out.log_abs_ = out.sign_ == 0 ? 0.0 : a.log_abs_ - b.log_abs_;
    return out;
}

LogNumber operator+(const LogNumber& a, const LogNumber& b) noexcept {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogNumber& big = a.log_abs_ >= b.log_abs_ ? a : b;
    const LogNumber& small = a.log_abs_ >= b.log_abs_ ? b : a;
    const double ratio = std::exp(small.log_abs_ - big.log_abs_);
    LogNumber out;
    if (big.sign_ == small.sign_) {
        out.sign_ = big.sign_;
        out.log_abs_ = big.log_abs_ + std::log1p(ratio);
    } else {
        if (ratio == 1.0) return {};
        out.sign_ = big.sign_;
        out.log_abs_ = big.log_abs_ + std::log1p(-ratio);
    }
    return out;
}

//------------------------------------------------------------------------------
// Gauss-Kronrod 7/15
//------------------------------------------------------------------------------

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b, int depth) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fv{};

    fv[7] = f(centre);
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }

    const double mean = 0.5 * kronrod;
    double abs_sum = kWgk[7] * std::fabs(fv[7]);
    double asc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) {
        abs_sum += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
        asc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
    }

    const double value = kronrod * half;
    abs_sum *= std::fabs(half);
    asc *= std::fabs(half);
    double err = std::fabs((kronrod - gauss) * half);
    // QUADPACK's scaling of |K15 - G7| towards the actual K15 error.
    if (asc != 0.0 && err != 0.0) {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * abs_sum, err);
    }
    if (!std::isfinite(value)) {
        throw ToleranceNotMet("integrate: non-finite integrand value on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]",
                              value, kInf);
    }
    return {a, b, value, err, depth};
}

QuadratureResult adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                          int max_depth) {
    constexpr int kMaxPanels = 200000;
    std::priority_queue<Panel> queue;
    Panel first = gauss_kronrod(f, a, b, 0);
    double total = first.value;
    double total_err = first.error;
    queue.push(first);
    std::vector<Panel> frozen;  // panels that hit max_depth
    double frozen_err = 0.0;

    auto target = [&] { return std::max(abs_tol, rel_tol * std::fabs(total)); };

    while (total_err > target() && !queue.empty()) {
        Panel worst = queue.top();
        queue.pop();
        if (worst.depth >= max_depth) {
            frozen.push_back(worst);
            frozen_err += worst.error;
            if (frozen_err > target()) break;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
        Panel right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        if (static_cast<int>(queue.size() + frozen.size()) > kMaxPanels) break;
    }

    // Re-sum from scratch to shed the accumulated update rounding.
    double value = 0.0;
    double err = 0.0;
    int panels = static_cast<int>(frozen.size() + queue.size());
    for (const Panel& p : frozen) {
        value += p.value;
        err += p.error;
    }
    while (!queue.empty()) {
        value += queue.top().value;
        err += queue.top().error;
        queue.pop();
    }
    if (err > std::max(abs_tol, rel_tol * std::fabs(value))) {
        throw ToleranceNotMet("integrate: tolerance not met on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "] (error bound " + std::to_string(err) + ")",
                              value, err);
    }
    return {value, err, panels};
}

QuadratureResult sqrt_substituted(const Integrand& f, double a, double b, bool at_left,
                                  double abs_tol, double rel_tol, int max_depth) {
    const double width = b - a;
    Integrand g = at_left ? Integrand([&](double u) { return 2.0 * u * f(a + u * u); })
                          : Integrand([&](double u) { return 2.0 * u * f(b - u * u); });
    return adaptive(g, 0.0, std::sqrt(width), abs_tol, rel_tol, max_depth);
}

}  // namespace

QuadratureResult integrate_detailed(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_depth < 1) {
        throw DomainError("integrate: tolerances must be positive and max_depth >= 1");
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate: need finite a < b");
    }
    switch (spec.endpoint_singularity) {
        case EndpointSingularity::none:
            return adaptive(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_depth);
        case EndpointSingularity::inverse_sqrt_left:
            return sqrt_substituted(f, a, b, true, spec.abs_tol, spec.rel_tol, spec.max_depth);
        case EndpointSingularity::inverse_sqrt_right:
            return sqrt_substituted(f, a, b, false, spec.abs_tol, spec.rel_tol, spec.max_depth);
        case EndpointSingularity::both: {
            const double mid = 0.5 * (a + b);
            const QuadratureResult left =
                sqrt_substituted(f, a, mid, true, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_depth);
            const QuadratureResult right =
                sqrt_substituted(f, mid, b, false, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_depth);
            return {left.value + right.value, left.error_bound + right.error_bound,
                    left.panels + right.panels};
        }
    }
    return {};
}

}  // namespace schatten
