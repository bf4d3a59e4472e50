#include "fraclog/errors.hpp"
#include "fraclog/heat.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/special.hpp"
#include "fraclog/torus.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace fraclog;

namespace {

// int_0^1 e^{-2t} I_k(2t) / t dt by an independent rule.
double wlog_oracle(int k) {
    auto f = [k](double t) { return t == 0.0 ? (k == 1 ? 1.0 : 0.0) : std::exp(-2.0 * t) * boost::math::cyl_bessel_i(k, 2.0 * t) / t; };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-15);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

TEST_CASE("W_log matches term-free quadrature") {
    for (int k = 1; k <= 8; ++k) {
        const KernelEntry e = w_log(1, LatticePoint{k});
        CHECK(e.value > 0.0);
        CHECK(e.value == doctest::Approx(wlog_oracle(k)).epsilon(1e-13));
        CHECK(e.error_estimate < 1e-12);
    }
    // d = 2: p factorizes, the oracle integrates the product.
    auto f = [](double t) {
        return t == 0.0 ? 0.0 : std::exp(-4.0 * t) * boost::math::cyl_bessel_i(2, 2.0 * t) * boost::math::cyl_bessel_i(1, 2.0 * t) / t;
    };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-15);
    CHECK(w_log(2, LatticePoint{2, 1}).value == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("one-dimensional closed forms") {
    // Phi^{1/2} = 2|sin(xi/2)| has coefficients -4/(pi(4k^2-1)); ln Phi has -1/|k|.
    for (int k = 1; k <= 12; ++k) {
        CHECK(w_s(1, 0.5, LatticePoint{k}).value == doctest::Approx(4.0 / (pi * (4.0 * k * k - 1.0))).epsilon(1e-12));
        CHECK(w_log(1, LatticePoint{k}).value + w_long(1, LatticePoint{k}).value == doctest::Approx(1.0 / k).epsilon(1e-12));
    }
    KernelCache cache(1);
    CHECK(cache.frac_row_sum(0.5).value == doctest::Approx(4.0 / pi).epsilon(1e-13));
    // ln Phi has zero mean on the circle.
    CHECK(cache.log_row_sum().value - cache.w_long(LatticePoint{0}).value - euler_gamma == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("W_s against the multiplier kernel in two dimensions") {
    for (double s : {0.25, 0.75}) {
        MultiplierKernel kernel(2, Multiplier::phi_power(s));
        for (const LatticePoint k : {LatticePoint{1, 0}, LatticePoint{1, 1}, LatticePoint{3, -2}}) {
            CHECK(w_s(2, s, k).value == doctest::Approx(-kernel(k).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("kernel evenness, positivity and tolerance stability") {
    for (int d = 1; d <= 2; ++d) {
        KernelCache cache(d, 1e-10);
        KernelCache fine(d, 1e-12);
        for (KernelKind kind : {KernelKind::w_s, KernelKind::w_log, KernelKind::w_long}) {
            const KernelTable table = build_kernel_table(cache, kind, 0.4, 4);
            for (const auto& [k, e] : table.entries) {
                CHECK(e.value > 0.0);
                CHECK(cache.get(kind, 0.4, -k).value == e.value);
                CHECK(std::fabs(fine.get(kind, 0.4, k).value - e.value) <= e.error_estimate + 1e-15);
            }
        }
    }
    CHECK_THROWS_AS(w_s(1, 0.5, LatticePoint{0}), InputError);
    CHECK_THROWS_AS(w_log(1, LatticePoint{0}), InputError);
    CHECK_THROWS_AS(w_s(1, 1.0, LatticePoint{1}), InputError);
    CHECK(w_long(1, LatticePoint{0}).value > 0.0);
}

TEST_CASE("s to one recovers the nearest-neighbour weight") {
    CHECK(w_s(1, 0.999, LatticePoint{1}).value == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(w_s(1, 0.999, LatticePoint{-1}).value == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("tail laws") {
    for (int d = 1; d <= 2; ++d) {
        std::vector<double> x, y;
        for (int k = 5; k <= 30; ++k) {
            std::vector<int> c(static_cast<std::size_t>(d), 0);
            c[0] = k;
            x.push_back(std::log(k));
            y.push_back(std::log(w_long(d, LatticePoint(c)).value));
        }
        CHECK(std::fabs(slope(x, y) + d) <= 0.15);
    }
    double top = 0.0, bottom = 1e300;
    for (int k = 1; k <= 12; ++k) {
        const double ratio = w_log(1, LatticePoint{k}).value * std::pow(k, k + 1.0) * std::exp(-k);
        top = std::max(top, ratio);
        bottom = std::min(bottom, ratio);
    }
    CHECK(top < 1.0);
    CHECK(bottom > 0.0);
}

TEST_CASE("long-range kernel truncation rate") {
    // Truncating int_1^inf p/t at T leaves a remainder ~ T^{-3/2} in three dimensions.
    const LatticePoint k{1, 0, 0};
    const double full = w_long(3, k).value;
    auto f = [&](double tau) { return heat_kernel_zd(3, std::exp(tau), k).value; };
    auto partial = [&](double horizon) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::log(horizon), 20, 1e-15);
    };
    const double e1 = full - partial(200.0);
    const double e2 = full - partial(400.0);
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 == doctest::Approx(std::pow(2.0, 1.5)).epsilon(2e-2));
    CHECK(e1 == doctest::Approx(std::pow(4.0 * pi, -1.5) * std::pow(200.0, -1.5) / 1.5).epsilon(2e-2));
}

TEST_CASE("row-sum identity") {
    for (int d = 1; d <= 3; ++d) {
        const RowSumIdentity r = wlog_row_sum_identity(d, 1e-8);
        CHECK(r.pass);
        CHECK(r.gap <= 1e-8);
        CHECK(r.tail_bound < 1e-10);
    }
    const RowSumIdentity fixed = wlog_row_sum_identity(1, 1e-8, 40);
    CHECK(fixed.radius == 40);
    CHECK(fixed.pass);
}

TEST_CASE("log-gradient row bound") {
    for (int d = 1; d <= 2; ++d) {
        KernelCache cache(d);
        const RowBound b = log_gradient_row_bound(cache, d == 1 ? 20 : 25);
        CHECK(std::isfinite(b.value));
        CHECK(b.gap <= 1e-10);
        CHECK(b.gap <= b.tail_bound);
        CHECK(b.value == doctest::Approx(wlog_row_sum_identity(d, 1e-8).rhs).epsilon(1e-8));
    }
    CHECK(wlog_tail_bound(1, 5) > wlog_tail_bound(1, 10));
}

TEST_CASE("pointwise operators") {
    KernelCache one(1);
    const LatticeFunction delta = LatticeFunction::delta(LatticePoint{0});
    const LatticeFunction zero(1);
    CHECK(log_laplacian_pointwise(one, zero, LatticePoint{3}) == 0.0);
    CHECK(frac_laplacian_pointwise(one, 0.5, zero, LatticePoint{3}) == 0.0);
    CHECK(frac_laplacian_pointwise(one, 0.999, delta, LatticePoint{0}) == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(frac_laplacian_pointwise(one, 0.001, delta, LatticePoint{0}) == doctest::Approx(1.0).epsilon(2e-2));
    const double far = log_laplacian_pointwise(one, delta, LatticePoint{5});
    CHECK(far < 0.0);
    CHECK(far == doctest::Approx(-one.w_log(LatticePoint{5}).value - one.w_long(LatticePoint{5}).value));

    for (int d = 1; d <= 2; ++d) {
        KernelCache cache(d);
        MultiplierKernel log_kernel(d, Multiplier::log_phi());
        MultiplierKernel frac_kernel(d, Multiplier::phi_power(0.3));
        const LatticeFunction u = LatticeFunction::random(d, 3, 5, 11);
        for (const LatticePoint& x : linf_box(d, 4)) {
            CHECK(log_laplacian_pointwise(cache, u, x) == doctest::Approx(multiplier_apply(log_kernel, u, x)).epsilon(1e-9));
            CHECK(frac_laplacian_pointwise(cache, 0.3, u, x) == doctest::Approx(multiplier_apply(frac_kernel, u, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("quadratic form grows logarithmically") {
    KernelCache cache(1);
    std::vector<int> n(30);
    std::iota(n.begin(), n.end(), 1);
    const GrowthReport g = quadratic_form_growth(cache, n);
    CHECK(g.increasing);
    CHECK(g.slope > 0.0);
    CHECK(g.r_squared > 0.99);
    for (double q : g.q) CHECK(q >= 0.0);

    // Brute-force pair sum agrees with the Toeplitz formula.
    KernelCache two(2);
    const std::vector<int> small = {1, 2, 4};
    const GrowthReport g2 = quadratic_form_growth(two, small);
    CHECK(g2.increasing);
    const std::vector<LatticePoint> ball = l1_ball(2, 1);
    double direct = 0.0;
    for (const auto& x : ball)
        for (const auto& y : ball) direct += two.w_long(x - y).value;
    CHECK(g2.q[0] == doctest::Approx(direct / ball.size()).epsilon(1e-14));
    CHECK_THROWS_AS(quadratic_form_growth(cache, std::vector<int>{31}), InputError);
}

TEST_CASE("convergence probes") {
    KernelCache cache(1);
    const LatticeFunction delta = LatticeFunction::delta(LatticePoint{0});
    const std::vector<double> s_list = {0.2, 0.1, 0.05, 0.025};
    for (double p : {std::numeric_limits<double>::infinity(), 2.0}) {
        const LatticeProbe probe = diff_quotient_error(cache, delta, s_list, p, 20);
        CHECK(probe.decreasing);
        for (std::size_t i = 0; i < s_list.size(); ++i) CHECK(probe.tail_part[i] < probe.window_part[i]);
    }
    const LatticeProbe zero = diff_quotient_error(cache, LatticeFunction(1), s_list, 2.0, 5);
    for (double e : zero.error) CHECK(e == 0.0);

    const std::vector<double> up = {0.9, 0.99, 0.999};
    const LatticeProbe to_one = lattice_convergence_probe(cache, delta, ProbeMode::s_to_1, up, std::numeric_limits<double>::infinity(), 20);
    CHECK(to_one.decreasing);
    CHECK(to_one.error.back() < 0.02);
    const std::vector<double> down = {0.1, 0.01, 0.001};
    const LatticeProbe to_zero = lattice_convergence_probe(cache, delta, ProbeMode::s_to_0, down, std::numeric_limits<double>::infinity(), 20);
    CHECK(to_zero.decreasing);
    CHECK(to_zero.error.back() < 0.02);
}

TEST_CASE("kernel CSV") {
    KernelCache cache(2);
    const KernelTable table = build_kernel_table(cache, KernelKind::w_log, 0.0, 2);
    CHECK(table.entries.size() == 12);
    CHECK(table.entries.front().first < table.entries.back().first);
    std::ostringstream out;
    write_kernel_csv(out, table);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "kind,d,s,k1,k2,value,err_est");
    std::getline(in, line);
    CHECK(line.rfind("w_log,2,0,-2,0,", 0) == 0);
    CHECK(parse_kernel_kind("w_long") == KernelKind::w_long);
    CHECK_THROWS_AS(parse_kernel_kind("w_x"), InputError);
}
