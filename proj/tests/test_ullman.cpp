#include "schatten/errors.hpp"
#include "schatten/numerics.hpp"
#include "schatten/random.hpp"
#include "schatten/ullman.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace schatten;

namespace {

double semicircle(double x) { return std::fabs(x) >= 1.0 ? 0.0 : 2.0 / kPi * std::sqrt(1.0 - x * x); }

double semicircle_cdf(double x) { return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / kPi; }

// F(x) = 1/2 + x^p/2 + (p/pi) int_x^1 t^(p-1) arcsin(x/t) dt for 0 <= x <= 1.
double cdf_arcsin_oracle(double p, double x) {
    const double ax = std::fabs(x);
    const double tail = integrate([&](double t) { return std::pow(t, p - 1.0) * std::asin(ax / t); }, ax, 1.0,
                                  QuadratureSpec{1e-14, 1e-12, 60});
    const double upper = 0.5 + 0.5 * std::pow(ax, p) + p / kPi * tail;
    return x >= 0.0 ? upper : 1.0 - upper;
}

// -int ln|x - y| f_p(y) dy written as -p int_0^1 t^(p-1) g(x, t) dt, where
// g(x, t) is the mean of ln|x - y| over the arcsine law on [-t, t].
double log_potential_oracle(double p, double x) {
    const double ax = std::fabs(x);
    auto g = [ax](double t) {
        if (t <= ax) return std::log((ax + std::sqrt(ax * ax - t * t)) / 2.0);
        return std::log(t / 2.0);
    };
    const QuadratureSpec spec{1e-14, 1e-12, 60};
    double acc = 0.0;
    if (ax < 1.0) acc += integrate([&](double t) { return std::pow(t, p - 1.0) * g(t); }, ax, 1.0, spec);
    if (ax > 0.0) acc += integrate([&](double t) { return std::pow(t, p - 1.0) * g(t); }, 0.0, ax, spec);
    return -p * acc;
}

}  // namespace

TEST_CASE("density: semicircle at p = 2") {
    CHECK(std::fabs(ullman_density(2.0, 0.0) - 2.0 / kPi) < 1e-15);
    CHECK(ullman_density(2.0, 1.0) == 0.0);
    CHECK(ullman_density(3.7, 1.0) == 0.0);
    CHECK(ullman_density(3.7, -1.5) == 0.0);
    CHECK(std::fabs(ullman_density(2.0, 0.5) - 2.0 / kPi * std::sqrt(0.75)) < 1e-14);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        worst = std::max(worst, std::fabs(ullman_density(2.0, x) - semicircle(x)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("density: high-precision reference values") {
    // Independent evaluation via t = sqrt(x^2 + u^2), 20 significant digits.
    struct Ref { double p, x, f; };
    const std::vector<Ref> refs{
        {1.5, 0.3, 0.62683479877373287999},
        {3.0, 0.9, 0.38878891236271250163},
        {4.5, 0.05, 0.41046750772651780845},
        {8.0, 0.7, 0.61015900300207387384},
        {1.0, 0.5, 0.41920071827870764142},
    };
    for (const auto& r : refs) {
        CAPTURE(r.p);
        CAPTURE(r.x);
        CHECK(std::fabs(ullman_density(r.p, r.x) - r.f) < 1e-12);
    }
    CHECK(std::fabs(ullman_density(1.5, 0.0) - 1.5 / (kPi * 0.5)) < 1e-15);
    CHECK(std::isinf(ullman_density(1.0, 0.0)));
}

TEST_CASE("density: evenness and support") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.5, 8.0}) {
        for (double x : {0.01, 0.3, 0.77, 0.999}) {
            CHECK(ullman_density(p, x) == ullman_density(p, -x));
            CHECK(ullman_density(p, x) > 0.0);
        }
    }
}

TEST_CASE("density: domain errors") {
    CHECK_THROWS_AS(ullman_density(0.5, 0.1), DomainError);
    CHECK_THROWS_AS(ullman_density(std::nan(""), 0.1), DomainError);
    CHECK_THROWS_AS(ullman_density(kInf, 0.1), DomainError);
    CHECK_THROWS_AS(ullman_density(2.0, std::nan("")), DomainError);
}

TEST_CASE("arccos form agrees with the density") {
    CHECK(std::fabs(ullman_density_arccos_form(2.0, 0.5) - 2.0 / kPi * std::sqrt(0.75)) < 1e-12);
    CHECK(std::fabs(ullman_density_arccos_form(3.0, 0.9) - ullman_density(3.0, 0.9)) <= 1e-8);
    CHECK(ullman_density_arccos_form(2.0, -0.5) == ullman_density_arccos_form(2.0, 0.5));
    for (double p : {1.2, 1.5, 2.5, 4.5}) {
        for (double x : {0.05, 0.4, 0.95}) CHECK(std::fabs(ullman_density_arccos_form(p, x) - ullman_density(p, x)) <= 1e-8);
    }
    CHECK_THROWS_AS(ullman_density_arccos_form(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(ullman_density_arccos_form(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(ullman_density_arccos_form(1.0, 0.5), DomainError);
}

TEST_CASE("density derivative") {
    CHECK(std::fabs(ullman_density_derivative(2.0, 0.5) + 2.0 / kPi * 0.5 / std::sqrt(0.75)) < 1e-12);
    CHECK(ullman_density_derivative(3.0, 0.0) == 0.0);
    CHECK(ullman_density_derivative(2.0, 0.0) == 0.0);
    CHECK(ullman_density_derivative(2.0, -0.5) == -ullman_density_derivative(2.0, 0.5));
    // Frozen high-precision numerical derivatives.
    CHECK(std::fabs(ullman_density_derivative(3.0, 0.5) - 0.077472182017929930391) < 1e-10);
    CHECK(std::fabs(ullman_density_derivative(1.5, 0.2) + 0.70494644046757480288) < 1e-10);
    CHECK_THROWS_AS(ullman_density_derivative(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(ullman_density_derivative(1.5, 0.0), DomainError);

    RandomStream rng(3, 0);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int i = 0; i < 20; ++i) {
            const double x = rng.uniform(-0.98, 0.98);
            if (std::fabs(x) < 1e-3) continue;
            const double h = 1e-5;
            const double fd = (ullman_density(p, x + h) - ullman_density(p, x - h)) / (2.0 * h);
            const double d = ullman_density_derivative(p, x);
            CAPTURE(p);
            CAPTURE(x);
            CHECK(std::fabs(fd - d) <= 1e-4 * std::max(std::fabs(d), 1e-3));
        }
    }
}

TEST_CASE("constants") {
    CHECK(std::fabs(constant_v(2.0) - 2.0) < 1e-15);
    CHECK(std::fabs(constant_alpha(2.0) - 0.25) < 1e-15);
    CHECK(std::fabs(constant_A(2.0) - std::exp(-0.25)) < 1e-15);
    CHECK(constant_A(kInf) == 0.5);
    CHECK(std::fabs(constant_v(1.0) - kPi) < 1e-14);
    CHECK_THROWS_AS(constant_v(0.9), DomainError);
    CHECK_THROWS_AS(constant_A(0.5), DomainError);

    const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 6.0, 12.0, kInf};
    for (std::size_t i = 1; i < ps.size(); ++i) CHECK(constant_A(ps[i]) < constant_A(ps[i - 1]));

    for (double p : {1.0, 1.5, 2.0, 3.0, 4.5}) {
        CAPTURE(p);
        CHECK(std::fabs(constant_alpha_quadrature(p) - constant_alpha(p)) <= 1e-8);
        CHECK(std::fabs(constant_alpha(p) * p * constant_v(p) - 1.0) < 1e-15);
    }
}

TEST_CASE("distribution: normalization and grid") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.5, 8.0}) {
        const UllmanDistribution dist(p);
        CAPTURE(p);
        CHECK(dist.normalization_defect() <= 1e-9);
        const auto& grid = dist.cdf_grid();
        REQUIRE(grid.size() > 2);
        CHECK(grid.front().first == -1.0);
        CHECK(grid.front().second == 0.0);
        CHECK(grid.back().first == 1.0);
        CHECK(grid.back().second == 1.0);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            REQUIRE(grid[i].first > grid[i - 1].first);
            REQUIRE(grid[i].second > grid[i - 1].second);
        }
    }
    CHECK_THROWS_AS(UllmanDistribution(0.99), DomainError);
}

TEST_CASE("cdf") {
    const UllmanDistribution d2(2.0);
    CHECK(d2.cdf(-1.0) == 0.0);
    CHECK(d2.cdf(-3.0) == 0.0);
    CHECK(d2.cdf(1.0) == 1.0);
    CHECK(d2.cdf(0.0) == 0.5);
    CHECK(std::fabs(d2.cdf(0.5) - (0.5 + (0.5 * std::sqrt(0.75) + std::asin(0.5)) / kPi)) < 1e-12);
    for (double x : {-0.99, -0.4, 0.1, 0.73, 0.999999}) CHECK(std::fabs(d2.cdf(x) - semicircle_cdf(x)) < 1e-12);

    for (double p : {1.5, 3.0, 4.5}) {
        const UllmanDistribution d(p);
        double prev = 0.0;
        for (double x : {-0.95, -0.5, -0.1, 0.2, 0.6, 0.9, 0.9999}) {
            CAPTURE(p);
            CAPTURE(x);
            CHECK(std::fabs(d.cdf(x) - cdf_arcsin_oracle(p, x)) <= 1e-10);
            CHECK(d.cdf(x) > prev);
            prev = d.cdf(x);
        }
    }
}

TEST_CASE("quantile inverts cdf") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 8.0}) {
        const UllmanDistribution d(p);
        CHECK(std::fabs(d.quantile(0.5)) < 1e-14);
        for (double u : {1e-9, 1e-4, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0 - 1e-7}) {
            CAPTURE(p);
            CAPTURE(u);
            const double x = d.quantile(u);
            CHECK(std::fabs(d.cdf(x) - u) <= 1e-8);
        }
        CHECK_THROWS_AS(d.quantile(0.0), DomainError);
        CHECK_THROWS_AS(d.quantile(1.0), DomainError);
    }
}

TEST_CASE("sampler moments at p = 2") {
    const UllmanDistribution d(2.0);
    RandomStream rng(2024, 1);
    const std::size_t n = 1000000;
    const std::vector<double> xs = d.sample(n, rng);
    double mean = 0.0, m2 = 0.0;
    for (double x : xs) {
        mean += x;
        m2 += x * x;
    }
    mean /= n;
    m2 /= n;
    CHECK(std::fabs(mean) <= 3.0 * std::sqrt(constant_alpha(2.0)) / 1e3);
    // Var(X^2) = E X^4 - alpha^2 = 1/8 - 1/16 under the semicircle law.
    CHECK(std::fabs(m2 - constant_alpha(2.0)) <= 3.0 * std::sqrt(1.0 / 16.0 / n));
}

TEST_CASE("sampler moment and KS at p = 3") {
    const double p = 3.0;
    const UllmanDistribution d(p);
    RandomStream rng(2024, 2);
    const std::size_t n = 100000;
    std::vector<double> xs = d.sample(n, rng);
    double s = 0.0, s2 = 0.0;
    for (double x : xs) {
        const double m = std::pow(std::fabs(x), p);
        s += m;
        s2 += m * m;
    }
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    CHECK(std::fabs(mean - constant_alpha(p)) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));

    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = d.cdf(xs[i]);
        ks = std::max({ks, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    CHECK(ks <= 1.63 / std::sqrt(static_cast<double>(n)) * 1.5);
}

TEST_CASE("entropy") {
    const UllmanDistribution d2(2.0);
    CHECK(std::fabs(d2.entropy() - (kLnPi - 0.5)) <= 1e-6);
    CHECK(std::fabs(d2.entropy() - 0.644729) < 1e-6);
    // Independent 15-digit evaluations.
    CHECK(std::fabs(UllmanDistribution(1.5).entropy() - 0.599547515660119) <= 1e-9);
    CHECK(std::fabs(UllmanDistribution(3.0).entropy() - 0.67271204163344) <= 1e-9);
    CHECK(std::fabs(UllmanDistribution(4.5).entropy() - 0.675269365522252) <= 1e-9);
}

TEST_CASE("log potential is constant plus field on the support") {
    for (double p : {1.5, 2.0, 3.0}) {
        const double v = constant_v(p);
        const double c0 = ullman_log_potential(p, 0.0);
        for (double x : {-0.9, -0.3, 0.2, 0.65, 1.0}) {
            CAPTURE(p);
            CAPTURE(x);
            const double u = ullman_log_potential(p, x);
            CHECK(std::fabs(u - log_potential_oracle(p, x)) <= 1e-9);
            CHECK(std::fabs(u + 0.5 * v * std::pow(std::fabs(x), p) - c0) <= 1e-9);
        }
    }
}

TEST_CASE("log energy identities") {
    for (double p : {2.0, 4.0}) {
        const UllmanDistribution d(p);
        CHECK(std::fabs(d.log_energy() - (kLn2 + 0.5 / p)) <= 1e-5);
    }
    for (double p : {1.5, 3.0, 4.5}) {
        const UllmanDistribution d(p);
        const UllmanConstants k = d.constants();
        CAPTURE(p);
        CHECK(std::fabs(k.I_p - (kLn2 + 1.5 / p)) <= 1e-5);
        CHECK(std::fabs(k.I_p - (k.log_energy + k.v_p * k.alpha_p)) <= 1e-12);
        CHECK(std::fabs(k.log_energy + 1.0 / p - (kLn2 + 1.5 / p)) <= 1e-5);
    }
}

TEST_CASE("regularity report") {
    const RegularityReport r2 = regularity_report(2.0);
    // f_2(x)/sqrt(1-|x|) = (2/pi) sqrt(1+|x|) on [0.5, 1 - 1e-8].
    CHECK(std::fabs(r2.boundary_ratio_min - 2.0 / kPi * std::sqrt(1.5)) < 1e-9);
    CHECK(std::fabs(r2.boundary_ratio_max - 2.0 / kPi * std::sqrt(2.0 - 1e-8)) < 1e-8);
    // Smooth and even at 0, so f_2(h) - f_2(0) ~ h^2.
    CHECK(std::fabs(r2.holder_exponent_at_0 - 2.0) <= 0.05);

    CHECK(std::fabs(regularity_report(1.5).holder_exponent_at_0 - 0.5) <= 0.05);
    CHECK(std::fabs(regularity_report(1.8).holder_exponent_at_0 - 0.8) <= 0.05);
    const RegularityReport r3 = regularity_report(3.0);
    CHECK(std::isfinite(r3.boundary_ratio_max));
    CHECK(r3.boundary_ratio_max / r3.boundary_ratio_min <= 10.0);
    CHECK(std::isnan(regularity_report(1.0).holder_exponent_at_0));
}
