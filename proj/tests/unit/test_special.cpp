#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <doctest.h>

#include <cmath>

using namespace fraclog;

TEST_CASE("gamma classical values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(pi)).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_fn(0.0), InputError);
    CHECK_THROWS_AS(gamma_fn(-3.0), InputError);
}

TEST_CASE("gamma against an independent oracle on [-10, 50]") {
    double worst = 0.0;
    for (double x = -9.975; x <= 50.0; x += 0.0371) {
        if (std::abs(x - std::round(x)) < 1e-9 && x <= 0) continue;
        const double ref = boost::math::tgamma(static_cast<long double>(x));
        worst = std::max(worst, std::abs(gamma_fn(x) / static_cast<double>(ref) - 1.0));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("gamma recurrence") {
    for (double x = -4.7; x < 30.0; x += 0.173) {
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
    }
}

TEST_CASE("log_gamma and rgamma") {
    CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-2.0) == 0.0);
    CHECK(rgamma(3.0) == doctest::Approx(0.5));
    CHECK(sin_pi(1.0) == 0.0);
    CHECK(sin_pi(0.5) == doctest::Approx(1.0));
}

TEST_CASE("bessel_i basic values") {
    CHECK(bessel_i(0, 0.0) == 1.0);
    CHECK(bessel_i(1, 0.0) == 0.0);
    CHECK(bessel_i(0, 2.0) == doctest::Approx(bessel_i_series(0, 2.0)).epsilon(1e-12));
    CHECK(bessel_i_scaled(-3, 1.7) == bessel_i_scaled(3, 1.7));
}

TEST_CASE("bessel_i against an independent oracle") {
    double worst = 0.0;
    for (int n : {0, 1, 2, 5, 17, 60, 150, 400}) {
        for (double z : {0.01, 0.3, 1.0, 4.0, 11.0, 37.0, 90.0, 200.0}) {
            const long double ref = boost::math::cyl_bessel_i(static_cast<long double>(n), static_cast<long double>(z));
            if (ref < 1e-290L) continue;
            const double ours = bessel_i(n, z);
            worst = std::max(worst, static_cast<double>(std::abs(ours / ref - 1.0L)));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("bessel_i series and quadrature agree on [0, 2]") {
    for (int n = 0; n <= 6; ++n) {
        for (double z = 0.05; z <= 2.0; z += 0.15) {
            CHECK(bessel_i(n, z) == doctest::Approx(bessel_i_series(n, z)).epsilon(1e-12));
        }
    }
}

TEST_CASE("generating function: sum of scaled I_n is one") {
    for (double z : {0.5, 3.0, 10.0, 20.0}) {
        double total = 0.0;
        for (int n = -80; n <= 80; ++n) total += bessel_i_scaled(n, z);
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("bessel_j classical values") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(std::abs(bessel_j(0.5, pi)) < 1e-15);
    for (double r : {0.3, 2.0, 7.5, 25.0, 300.0}) {
        CHECK(bessel_j(0.5, r) == doctest::Approx(std::sqrt(2.0 / (pi * r)) * std::sin(r)).epsilon(1e-10));
        CHECK(bessel_j(-0.5, r) == doctest::Approx(std::sqrt(2.0 / (pi * r)) * std::cos(r)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bessel_j(-1.0, 1.0), InputError);
}

TEST_CASE("bessel_j first zero of J_1 is bracketed near 3.8317") {
    CHECK(bessel_j(1.0, 3.83) > 0.0);
    CHECK(bessel_j(1.0, 3.833) < 0.0);
    double lo = 3.8, hi = 3.9;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bessel_j(1.0, mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(3.8317059702075123).epsilon(1e-12));
}

TEST_CASE("bessel_j against an independent oracle up to 1e4") {
    double worst = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 1.5, 3.0}) {
        for (double r = 0.1; r < 1e4; r *= 1.37) {
            const double ref = boost::math::cyl_bessel_j(nu, r);
            const double envelope = std::min(1.0, std::sqrt(2.0 / (pi * r)));
            worst = std::max(worst, std::abs(bessel_j(nu, r) - ref) / envelope);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("bessel_j series and asymptotic overlap at the crossover") {
    double worst = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 2.0}) {
        for (double r = 16.0; r <= 24.0; r += 0.25) {
            worst = std::max(worst, std::abs(bessel_j_series(nu, r) - bessel_j_asymptotic(nu, r)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("bessel_j exact routes in the middle range") {
    double worst = 0.0;
    for (double r = bessel_j_series_limit; r <= bessel_j_asymptotic_start; r += 0.173) {
        for (double nu : {0.0, 1.0, 3.0, -0.5, 0.5, 2.5}) {
            worst = std::max(worst, std::abs(bessel_j(nu, r) - boost::math::cyl_bessel_j(nu, r)));
        }
        worst = std::max(worst, std::abs(bessel_j_integral(2, r) - boost::math::cyl_bessel_j(2, r)));
    }
    CHECK(worst < 2e-15);
}

TEST_CASE("Euler split identity") {
    const EulerSplit split = euler_split();
    CHECK(split.near_zero.value < 0.0);
    CHECK(split.tail.value > 0.0);
    CHECK(split.tail.value < 1.0);
    CHECK(std::abs(euler_split_check() + euler_gamma) < 1e-10);
}

TEST_CASE("adaptive quadrature") {
    const auto r = integrate([](double x) { return std::exp(-x) * std::cos(3 * x); }, 0.0, 10.0);
    const double exact = (1.0 - std::exp(-10.0) * (std::cos(30.0) - 3 * std::sin(30.0))) / 10.0;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-13));
    CHECK(r.abs_error_estimate >= 0.0);
    const auto sing = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(sing.value == doctest::Approx(2.0).epsilon(1e-10));
    QuadratureOptions tight;
    tight.max_evaluations = 50;
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(400 * x); }, 0.0, 10.0, tight), BudgetError);
}
