#include "fraclog/errors.hpp"
#include "fraclog/graph.hpp"
#include "fraclog/spectral.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace fraclog;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> u(n);
    for (double& v : u) v = unif(rng);
    return u;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Dense generalized eigenproblem L phi = lambda M phi solved independently of
// the library (Eigen's generalized self-adjoint solver).
Eigen::MatrixXd dense_function(const WeightedGraph& g, double (*f)(double), bool skip_zero) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        const auto a = static_cast<Eigen::Index>(e.u), b = static_cast<Eigen::Index>(e.v);
        lap(a, a) += e.w;
        lap(b, b) += e.w;
        lap(a, b) -= e.w;
        lap(b, a) -= e.w;
    }
    for (Eigen::Index x = 0; x < n; ++x) mass(x, x) = g.measure(static_cast<Vertex>(x));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, mass);
    Eigen::VectorXd fl(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double lam = solver.eigenvalues()(j);
        fl(j) = (skip_zero && lam < 1e-10) ? 0.0 : f(std::max(lam, 0.0));
    }
    const Eigen::MatrixXd& vec = solver.eigenvectors();
    return vec * fl.asDiagonal() * vec.transpose() * mass;
}

double sqrt_fn(double x) { return std::sqrt(x); }
double log_fn(double x) { return std::log(x); }

}  // namespace

TEST_CASE("decompose small graphs") {
    const auto p2 = decompose(path_graph(2));
    CHECK(p2.eigenvalues[0] == 0.0);
    CHECK(p2.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    const auto c4 = decompose(cycle_graph(4));
    const std::vector<double> expected{0.0, 2.0, 2.0, 4.0};
    for (std::size_t j = 0; j < 4; ++j) CHECK(c4.eigenvalues[j] == doctest::Approx(expected[j]).epsilon(1e-13));
    CHECK(c4.zero_modes == 1u);
}

TEST_CASE("decomposition invariants on random graphs") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto g = random_connected_graph({.vertices = 10 + 5 * seed, .seed = seed});
        const auto dec = decompose(g);
        const auto n = dec.eigenvectors.cols();
        double total_mu = 0.0;
        for (double m : dec.measure) total_mu += m;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                double ip = 0.0;
                for (Eigen::Index x = 0; x < n; ++x) ip += dec.measure[static_cast<std::size_t>(x)] * dec.eigenvectors(x, i) * dec.eigenvectors(x, j);
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        }
        CHECK(dec.max_residual < 1e-9);
        CHECK(dec.zero_modes == 1u);
        for (Eigen::Index x = 0; x < n; ++x) CHECK(dec.eigenvectors(x, 0) == doctest::Approx(1.0 / std::sqrt(total_mu)).epsilon(1e-10));
    }
}

TEST_CASE("normalized spectrum lies in [0, 2]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto base = random_connected_graph({.vertices = 25, .seed = seed});
        const auto edges = base.edges();
        const auto g = WeightedGraph::build(base.size(), edges, LaplacianKind::normalized);
        const auto dec = decompose(g);
        CHECK(dec.eigenvalues.back() <= 2.0 + 1e-12);
    }
}

TEST_CASE("apply_function consistency") {
    const auto g = random_connected_graph({.vertices = 18, .seed = 3});
    const auto dec = decompose(g);
    const auto u = random_vector(g.size(), 5);
    const auto lu = laplacian_apply(g, u);
    const auto id = apply_function(dec, [](double lam) { return lam; }, u);
    for (std::size_t x = 0; x < u.size(); ++x) CHECK(id[x] == doctest::Approx(-lu[x]).epsilon(1e-10));
    const auto one = apply_function(dec, [](double) { return 1.0; }, u);
    CHECK(max_abs_diff(one, u) < 1e-12);
    const auto proj = apply_function(dec, [](double lam) { return lam == 0.0 ? 1.0 : 0.0; }, u);
    CHECK(max_abs_diff(proj, mean_projection(g, u)) < 1e-12);
    CHECK_THROWS_AS(apply_function(dec, [](double lam) { return 1.0 / lam; }, u), InputError);
    CHECK_NOTHROW(apply_function(dec, [](double lam) { return 1.0 / lam; }, u, ZeroMode::skip));
}

TEST_CASE("fractional and logarithmic spectral values") {
    const auto p2g = path_graph(2);
    const auto p2 = decompose(p2g);
    const std::vector<double> delta{1.0, 0.0};
    const auto half = frac_laplacian_spectral(p2, 0.5, delta);
    CHECK(half[0] == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(half[1] == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-14));
    const auto lg = log_laplacian_spectral(p2, delta);
    CHECK(lg[0] == doctest::Approx(0.34657359027997264).epsilon(1e-14));
    CHECK(lg[1] == doctest::Approx(-0.34657359027997264).epsilon(1e-14));

    const std::vector<double> constant{2.0, 2.0};
    CHECK(max_abs(frac_laplacian_spectral(p2, 0.3, constant)) < 1e-14);
    CHECK(max_abs(log_laplacian_spectral(p2, constant)) < 1e-14);
    const auto one = frac_laplacian_spectral(p2, 1.0, delta);
    const auto lap = laplacian_apply(p2g, delta);
    CHECK(max_abs_diff(one, std::vector<double>{-lap[0], -lap[1]}) < 1e-14);

    const auto c4g = cycle_graph(4);
    const auto c4 = decompose(c4g);
    const std::vector<double> d4{1.0, 0.0, 0.0, 0.0};
    const Eigen::MatrixXd oracle = dense_function(c4g, log_fn, true);
    const auto lc = log_laplacian_spectral(c4, d4);
    for (std::size_t x = 0; x < 4; ++x) CHECK(lc[x] == doctest::Approx(oracle(static_cast<Eigen::Index>(x), 0)).epsilon(1e-12));

    const std::vector<Edge> two{{0, 1, 1.0}, {2, 3, 1.0}};
    const auto split = decompose(WeightedGraph::build(4, two, LaplacianKind::standard));
    CHECK_THROWS_AS(log_laplacian_spectral(split, d4), InputError);
}

TEST_CASE("fractional power against a generalized eigensolver oracle") {
    const auto g = random_connected_graph({.vertices = 22, .seed = 11});
    const auto dec = decompose(g);
    const Eigen::MatrixXd oracle = dense_function(g, sqrt_fn, true);
    const auto u = random_vector(g.size(), 12);
    const auto ours = frac_laplacian_spectral(dec, 0.5, u);
    const Eigen::VectorXd ref = oracle * Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
    for (std::size_t x = 0; x < u.size(); ++x) CHECK(ours[x] == doctest::Approx(ref(static_cast<Eigen::Index>(x))).epsilon(1e-10));
}

TEST_CASE("heat semigroup") {
    const auto p2 = decompose(path_graph(2));
    const std::vector<double> delta{1.0, 0.0};
    CHECK(max_abs_diff(heat_apply(p2, 0.0, delta), delta) == 0.0);
    CHECK(heat_apply(p2, 1.0, delta)[0] == doctest::Approx((1.0 + std::exp(-2.0)) / 2.0).epsilon(1e-14));

    const auto g = random_connected_graph({.vertices = 20, .seed = 4});
    const auto dec = decompose(g);
    const auto u = random_vector(g.size(), 6);
    const auto composed = heat_apply(dec, 0.7, heat_apply(dec, 1.3, u));
    CHECK(max_abs_diff(composed, heat_apply(dec, 2.0, u)) < 1e-10);
    double mass0 = 0.0, mass1 = 0.0;
    const auto ht = heat_apply(dec, 3.0, u);
    for (std::size_t x = 0; x < u.size(); ++x) {
        mass0 += g.measure(x) * u[x];
        mass1 += g.measure(x) * ht[x];
    }
    CHECK(std::abs(mass0 - mass1) < 1e-10);
    const auto mean = mean_projection(g, u);
    double prev = 1e300;
    for (double t : {1.0, 4.0, 16.0, 64.0}) {
        const double dist = max_abs_diff(heat_apply(dec, t, u), mean);
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("fractional power is symmetric in l2(mu)") {
    const auto g = random_connected_graph({.vertices = 15, .seed = 8});
    const auto dec = decompose(g);
    const auto u = random_vector(g.size(), 1);
    const auto v = random_vector(g.size(), 2);
    const auto mu = g.measures();
    CHECK(std::abs(inner_product(mu, frac_laplacian_spectral(dec, 0.4, u), v) -
                   inner_product(mu, u, frac_laplacian_spectral(dec, 0.4, v))) < 1e-10);
}

TEST_CASE("heat propagator matches the spectral semigroup") {
    const auto g = random_connected_graph({.vertices = 20, .seed = 9});
    const auto dec = decompose(g);
    const HeatPropagator heat(g);
    auto v = random_vector(g.size(), 3);
    const auto start = v;
    heat.advance(v, 0.4);
    heat.advance(v, 2.1);
    CHECK(max_abs_diff(v, heat_apply(dec, 2.5, start)) < 1e-12);
}

TEST_CASE("Bochner fractional route") {
    const auto p2g = path_graph(2);
    const std::vector<double> delta{1.0, 0.0};
    const auto r = bochner_frac(p2g, 0.5, delta);
    CHECK(r.value[0] == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
    CHECK(r.error_estimate <= 1e-12);
    const std::vector<double> constant{1.5, 1.5};
    CHECK(max_abs(bochner_frac(p2g, 0.5, constant).value) == 0.0);

    const auto g = random_connected_graph({.vertices = 20, .seed = 21});
    const auto dec = decompose(g);
    const auto u = random_vector(g.size(), 22);
    const auto ref = frac_laplacian_spectral(dec, 0.3, u);
    const auto br = bochner_frac(g, 0.3, u);
    CHECK(max_abs_diff(ref, br.value) <= 1e-8 * max_abs(ref));
    CHECK_THROWS_AS(bochner_frac(g, 1.0, u), InputError);
}

TEST_CASE("Bochner logarithmic route") {
    const auto p2g = path_graph(2);
    const std::vector<double> eig{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    const auto r = bochner_log(p2g, eig);
    CHECK(r.value[0] == doctest::Approx(std::log(2.0) * eig[0]).epsilon(1e-9));
    CHECK(r.value[1] == doctest::Approx(std::log(2.0) * eig[1]).epsilon(1e-9));

    const auto c4g = cycle_graph(4);
    std::vector<double> u{0.75, -0.25, -0.25, -0.25};
    const auto ref = log_laplacian_spectral(decompose(c4g), u);
    CHECK(max_abs_diff(ref, bochner_log(c4g, u).value) <= 1e-8);

    const std::vector<double> phi0{0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bochner_log(c4g, phi0), InputError);
}

TEST_CASE("convergence probes") {
    const auto p2 = path_graph(2);
    const std::vector<double> delta{1.0, 0.0};
    const std::vector<double> s_up{0.9, 0.99, 0.999};
    const auto up = convergence_probe_finite(p2, delta, ProbeMode::s_to_1, s_up);
    CHECK(up[0] > up[1]);
    CHECK(up[1] > up[2]);

    const std::vector<double> constant{1.0, 1.0};
    const std::vector<double> s_down{0.1, 0.01};
    for (double e : convergence_probe_finite(p2, constant, ProbeMode::s_to_0, s_down)) CHECK(e == doctest::Approx(0.0));

    const std::vector<double> eig{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    const std::vector<double> s_dq{0.2, 0.1, 0.05};
    const auto dq = convergence_probe_finite(p2, eig, ProbeMode::diff_quotient, s_dq);
    for (std::size_t i = 0; i < s_dq.size(); ++i) {
        const double s = s_dq[i];
        CHECK(dq[i] == doctest::Approx(std::abs((std::pow(2.0, s) - 1.0) / s - std::log(2.0))).epsilon(1e-10));
    }
}
