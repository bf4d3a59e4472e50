#include "fraclog/asymptotics.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/heat.hpp"
#include "fraclog/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>

using namespace fraclog;

namespace {

// Distributional Fourier transform of |eta|^{2s}.
double transform_oracle(double s, int d) {
    return std::pow(2.0, 2.0 * s + d) * std::pow(pi, 0.5 * d) * boost::math::tgamma(s + 0.5 * d) / boost::math::tgamma(-s);
}

}  // namespace

TEST_CASE("large-time constant") {
    CHECK(c_sd(0.5, 1) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(c_sd(1.0, 1) == doctest::Approx(0.5 / std::sqrt(pi)).epsilon(1e-15));
    for (int d = 1; d <= 3; ++d)
        for (double s : {0.1, 0.3, 0.5, 0.8, 1.0}) CHECK(c_sd(s, d) > 0.0);
    // s = 1 is the lattice heat kernel itself.
    const double t = 1e4;
    CHECK(std::sqrt(t) * heat_kernel_zd(1, t, LatticePoint{0}).value == doctest::Approx(c_sd(1.0, 1)).epsilon(1e-2));
    CHECK_THROWS_AS(c_sd(0.0, 1), InputError);
}

TEST_CASE("cutoff limit reproduces the transform") {
    for (auto [s, d] : {std::pair{0.5, 1}, std::pair{-0.25, 1}, std::pair{0.25, 1}, std::pair{0.5, 2}, std::pair{-0.5, 2}}) {
        const CutoffLimit a = a_sd(s, d);
        CHECK(a.value == doctest::Approx(transform_oracle(s, d)).epsilon(2e-5));
        CHECK(a.stability < 5e-3);
        CHECK(a.partial.size() == 4);
    }
    CHECK(a_sd(0.5, 1).value == doctest::Approx(-2.0).epsilon(1e-3));
}

TEST_CASE("sign of the cutoff limit") {
    for (double s : {0.1, 0.3, 0.7, 0.9}) {
        CHECK(a_sd(s, 1).value < 0.0);
        CHECK(a_sd(s, 2).value < 0.0);
    }
    for (double t : {0.1, 0.25, 0.4}) CHECK(a_sd(-t, 1).value > 0.0);
    for (double t : {0.3, 0.9}) CHECK(a_sd(-t, 2).value > 0.0);
}

TEST_CASE("cutoff and direction independence") {
    for (auto [s, d] : {std::pair{0.5, 1}, std::pair{0.5, 2}, std::pair{-0.25, 1}}) {
        const CutoffReport r = a_sd_report(s, d);
        CHECK(r.family_gap <= 1e-4);
        CHECK(r.direction_gap <= 1e-4);
        CHECK(r.pass);
    }
}

TEST_CASE("integration by parts validator") {
    for (double s : {0.5, 0.25, -0.25, 0.9}) {
        for (double n : {64.0, 256.0}) {
            CHECK(cutoff_integral_by_parts(s, n) == doctest::Approx(cutoff_integral(s, 1, CutoffFamily::poly_smooth, n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("cutoff argument checks") {
    CHECK_THROWS_AS(a_sd(0.0, 1), InputError);
    CHECK_THROWS_AS(a_sd(1.0, 1), InputError);
    CHECK_THROWS_AS(a_sd(-0.5, 1), InputError);
    CHECK_THROWS_AS(a_sd(0.5, 1, {CutoffFamily::poly_smooth, {128.0}}), InputError);
    CHECK_THROWS_AS(a_sd(0.5, 1, {CutoffFamily::poly_smooth, {128.0, 64.0}}), InputError);
    // Far too small scales do not settle.
    CHECK_THROWS_AS(a_sd(0.5, 2, {CutoffFamily::exp_bump, {8.0, 16.0, 32.0}}), BudgetError);
}

TEST_CASE("large-time decay") {
    const std::vector<double> t = {1e2, 3e2, 1e3, 3e3, 1e4};
    for (auto [d, s] : {std::pair{1, 0.5}, std::pair{2, 0.5}, std::pair{1, 0.25}}) {
        const LawReport r = large_time_fit(d, s, t);
        CHECK(r.pass);
        CHECK(r.exponent_err <= 1e-2);
        CHECK(r.rel_err <= 1e-2);
        CHECK(r.fit.r_squared >= 0.999);
    }
    CHECK(large_time_fit(1, 0.5, t).fit.constant == doctest::Approx(1.0 / pi).epsilon(1e-2));
}

TEST_CASE("fractional diffusion tails") {
    const std::vector<int> k = {100, 150, 200, 300, 400};
    const LawReport one = tail_fit_ps(1, 0.5, 1.0, k);
    CHECK(one.pass);
    CHECK(one.fit.exponent == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(one.fit.constant == doctest::Approx(1.0 / pi).epsilon(3e-2));
    CHECK(one.fit.r_squared >= 0.999);
    const LawReport doubled = tail_fit_ps(1, 0.5, 2.0, k);
    CHECK(doubled.fit.constant / one.fit.constant == doctest::Approx(2.0).epsilon(2e-2));

    const std::vector<int> k2 = {20, 30, 40, 50, 60};
    CHECK(tail_fit_ps(2, 0.5, 1.0, k2).pass);
    CHECK_THROWS_AS(tail_fit_ps(1, 0.5, 1.0, std::vector<int>{100, 4000}), BudgetError);
    CHECK_THROWS_AS(tail_fit_ps(1, 0.5, 1.0, std::vector<int>{200, 100}), InputError);
}

TEST_CASE("log-diffusion tails") {
    const std::vector<int> k = {100, 150, 200, 300, 400};
    const LawReport r = tail_fit_plog(1, 0.25, k);
    CHECK(r.pass);
    CHECK(r.fit.exponent == doctest::Approx(-0.5).epsilon(0.2));
    CHECK(r.fit.constant > 0.0);
    CHECK(r.reference_constant == doctest::Approx(transform_oracle(-0.25, 1) / (2.0 * pi)).epsilon(1e-5));
    CHECK_THROWS_AS(tail_fit_plog(1, 0.5, k), LifespanError);
}

TEST_CASE("log-diffusion blow-up at the lifespan edge") {
    const std::vector<double> gaps = {1e-2, 1e-3, 1e-4, 1e-5};
    const BlowupReport one = blowup_fit_plog(1, LatticePoint{1}, gaps);
    CHECK(one.limit == doctest::Approx(1.0 / pi).epsilon(1e-2));
    CHECK(one.matches == "sphere_normalized");
    CHECK(one.discrepancy);
    CHECK(one.increasing);
    CHECK(one.rel_err_sphere > 0.5);
    const BlowupReport three = blowup_fit_plog(1, LatticePoint{3}, gaps);
    CHECK(three.limit == doctest::Approx(one.limit).epsilon(1e-2));
    CHECK_THROWS_AS(blowup_fit_plog(1, LatticePoint{0}, gaps), InputError);
}
