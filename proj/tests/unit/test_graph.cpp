#include "fraclog/errors.hpp"
#include "fraclog/graph.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace fraclog;

TEST_CASE("validate") {
    const auto p2 = path_graph(2);
    const auto diag = validate(p2);
    CHECK(diag.connected);
    CHECK(diag.mu_min == 1.0);
    CHECK_FALSE(diag.delta_alpha.has_value());

    const std::vector<Edge> looped{{0, 1, 1.0}, {0, 0, 1.0}, {1, 1, 1.0}};
    const auto g = WeightedGraph::build(2, looped, LaplacianKind::standard, {}, true);
    const auto dl = validate(g);
    REQUIRE(dl.delta_alpha.has_value());
    CHECK(*dl.delta_alpha == doctest::Approx(0.5));

    const std::vector<Edge> asym{{0, 1, 1.0}, {1, 0, 2.0}};
    CHECK_THROWS_AS(WeightedGraph::build(2, asym, LaplacianKind::standard), InputError);
    const std::vector<Edge> neg{{0, 1, -1.0}};
    CHECK_THROWS_AS(WeightedGraph::build(2, neg, LaplacianKind::standard), InputError);
    const std::vector<double> bad_mu{1.0, 0.0};
    const std::vector<Edge> one{{0, 1, 1.0}};
    CHECK_THROWS_AS(WeightedGraph::build(2, one, LaplacianKind::custom, bad_mu), InputError);
    CHECK_THROWS_AS(WeightedGraph::build(2, looped, LaplacianKind::standard), InputError);
}

TEST_CASE("degree") {
    CHECK(degree(path_graph(2), 0) == 1.0);
    const auto c4 = cycle_graph(4);
    for (Vertex x = 0; x < 4; ++x) CHECK(degree(c4, x) == 2.0);
    CHECK(degree(star_graph(3), 0) == 3.0);
    CHECK_THROWS_AS(degree(c4, 9), InputError);
}

TEST_CASE("graph_distance") {
    const auto p2 = path_graph(2);
    CHECK(graph_distance(p2, 0, 0) == 0u);
    CHECK(graph_distance(p2, 0, 1) == 1u);
    const std::vector<Edge> two{{0, 1, 1.0}, {2, 3, 1.0}};
    const auto g = WeightedGraph::build(4, two, LaplacianKind::standard);
    CHECK_FALSE(graph_distance(g, 0, 3).has_value());
    CHECK_FALSE(validate(g).connected);
}

TEST_CASE("graph_distance is a metric") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto g = random_connected_graph({.vertices = 12, .seed = seed});
        std::vector<std::vector<std::optional<std::size_t>>> dist;
        for (Vertex x = 0; x < g.size(); ++x) dist.push_back(distances_from(g, x));
        for (Vertex x = 0; x < g.size(); ++x) {
            for (Vertex y = 0; y < g.size(); ++y) {
                CHECK(dist[x][y] == dist[y][x]);
                CHECK((*dist[x][y] == 0) == (x == y));
                for (Vertex z = 0; z < g.size(); ++z) CHECK(*dist[x][z] <= *dist[x][y] + *dist[y][z]);
            }
        }
    }
}

TEST_CASE("ball_volume") {
    const auto c4 = cycle_graph(4);
    CHECK(ball_volume(c4, 0, 0) == 1.0);
    CHECK(ball_volume(c4, 0, 1) == 3.0);
    CHECK(ball_volume(c4, 0, 2) == 4.0);
}

TEST_CASE("laplacian_apply") {
    const auto p2 = path_graph(2);
    const std::vector<double> constant{3.0, 3.0};
    for (double v : laplacian_apply(p2, constant)) CHECK(v == 0.0);
    const std::vector<double> u{1.0, 0.0};
    const auto lu = laplacian_apply(p2, u);
    CHECK(lu[0] == -1.0);
    CHECK(lu[1] == 1.0);
    const auto c4 = cycle_graph(4);
    const std::vector<double> delta{1.0, 0.0, 0.0, 0.0};
    const auto lc = laplacian_apply(c4, delta);
    CHECK(lc[0] == -2.0);
    CHECK(lc[1] == 1.0);
    CHECK(lc[3] == 1.0);
    CHECK(lc[2] == 0.0);
}

TEST_CASE("summation by parts on random graphs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = random_connected_graph({.vertices = 5 + 4 * seed, .seed = seed});
        std::vector<double> u(g.size());
        for (double& v : u) v = unif(rng);
        const auto lu = laplacian_apply(g, u);
        double total = 0.0;
        for (Vertex x = 0; x < g.size(); ++x) total += g.measure(x) * lu[x];
        CHECK(std::abs(total) < 1e-12);
    }
}

TEST_CASE("shell_count") {
    CHECK(shell_count(1, 3) == 2u);
    for (int d = 1; d <= 4; ++d) CHECK(shell_count(d, 0) == 1u);
    for (int d = 1; d <= 3; ++d) {
        for (int k = 0; k <= 6; ++k) {
            // brute-force enumeration over the box [-k, k]^d
            std::uint64_t count = 0;
            std::vector<int> x(static_cast<std::size_t>(d), -k);
            while (true) {
                int norm = 0;
                for (int c : x) norm += std::abs(c);
                if (norm == k) ++count;
                std::size_t j = 0;
                while (j < x.size() && x[j] == k) x[j++] = -k;
                if (j == x.size()) break;
                ++x[j];
            }
            CHECK(shell_count(d, k) == count);
        }
    }
    CHECK(shell_count(2, 2) == 8u);
    CHECK(lattice_ball_count(2, 1) == 5u);
}

TEST_CASE("shell_count polynomial growth with a fitted constant") {
    for (int d = 1; d <= 3; ++d) {
        double constant = 0.0;
        for (int k = 1; k <= 200; ++k) {
            constant = std::max(constant, static_cast<double>(shell_count(d, k)) / std::pow(k, d - 1));
            CHECK(shell_count(d, k + 1) >= shell_count(d, k));
        }
        CHECK(constant == doctest::Approx(std::pow(2.0, d) / std::tgamma(d)).epsilon(0.6));
    }
}

TEST_CASE("generators and text format") {
    CHECK(generate_graph("path:5").size() == 5);
    CHECK(generate_graph("cycle:6,normalized").kind() == LaplacianKind::normalized);
    CHECK(generate_graph("star:4").size() == 5);
    const auto r1 = generate_graph("random:15:7");
    const auto r2 = generate_graph("random:15:7");
    CHECK(validate(r1).connected);
    REQUIRE(r1.edges().size() == r2.edges().size());
    CHECK_THROWS_AS(generate_graph("wheel:4"), InputError);

    std::istringstream good("# triangle\nn 3\nmu 0 2.0\nedge 0 1 1\nedge 1 2 0.5\nedge 2 0 1\n");
    const auto g = parse_graph(good);
    CHECK(g.size() == 3);
    CHECK(g.measure(0) == 2.0);
    CHECK(degree(g, 1) == 1.5);

    std::istringstream bad("n 3\nedge 0 1 1\nedge 1 7 1\n");
    try {
        parse_graph(bad);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}
