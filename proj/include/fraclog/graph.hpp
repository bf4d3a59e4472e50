#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraclog {

using Vertex = std::size_t;

enum class LaplacianKind { standard, normalized, custom };

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double w = 0.0;
};

struct Neighbor {
    Vertex vertex = 0;
    double weight = 0.0;
};

// Finite weighted graph (V, E, mu, w). Immutable after construction.
class WeightedGraph {
public:
    // Edges are undirected; an edge listed in both orientations must carry the
    // same weight. Repeated entries with equal weight are merged. For kind
    // standard the measure is 1, for normalized it is the degree, and for
    // custom it is taken from `measure`.
    static WeightedGraph build(std::size_t n, std::span<const Edge> edges, LaplacianKind kind,
                               std::span<const double> measure = {}, bool allow_loops = false);

    std::size_t size() const { return measure_.size(); }
    LaplacianKind kind() const { return kind_; }
    std::span<const Neighbor> neighbors(Vertex x) const;  // sorted, loops excluded
    double loop_weight(Vertex x) const;
    double measure(Vertex x) const;
    std::span<const double> measures() const { return measure_; }
    double degree(Vertex x) const;  // includes the loop weight
    bool has_loops() const { return has_loops_; }
    std::vector<Edge> edges() const;  // u <= v, lexicographic

private:
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> loops_;
    std::vector<double> measure_;
    std::vector<double> degree_;
    LaplacianKind kind_ = LaplacianKind::standard;
    bool has_loops_ = false;
};

struct GraphDiagnostics {
    bool connected = false;
    double mu_min = 0.0;
    double mu_max = 0.0;
    double w_min = 0.0;
    std::optional<double> delta_alpha;
    bool locally_finite = true;
};

GraphDiagnostics validate(const WeightedGraph& g);

double degree(const WeightedGraph& g, Vertex x);

// Hop distance; nullopt across components.
std::optional<std::size_t> graph_distance(const WeightedGraph& g, Vertex x, Vertex y);
std::vector<std::optional<std::size_t>> distances_from(const WeightedGraph& g, Vertex x);

double ball_volume(const WeightedGraph& g, Vertex x, std::size_t r);

// (Delta u)(x) = (1/mu(x)) sum_y w_xy (u(y) - u(x)).
std::vector<double> laplacian_apply(const WeightedGraph& g, std::span<const double> u);

// Number of points of Z^d at l1 distance exactly k from the origin.
std::uint64_t shell_count(int d, int k);

// Number of points of Z^d with l1 norm at most r.
std::uint64_t lattice_ball_count(int d, int r);

// Generators.
WeightedGraph path_graph(std::size_t n, LaplacianKind kind = LaplacianKind::standard);
WeightedGraph cycle_graph(std::size_t n, LaplacianKind kind = LaplacianKind::standard);
WeightedGraph star_graph(std::size_t leaves, LaplacianKind kind = LaplacianKind::standard);

struct RandomGraphOptions {
    std::size_t vertices = 20;
    std::uint64_t seed = 1;
    double extra_edge_probability = 0.12;
    double weight_min = 0.5;
    double weight_max = 2.0;
    double measure_min = 0.5;
    double measure_max = 2.0;
};

// Random spanning tree plus independent extra edges; random weights and
// measure (custom kind). Deterministic in the seed.
WeightedGraph random_connected_graph(const RandomGraphOptions& options);

// Generator syntax: path:N, cycle:N, star:LEAVES, random:N:SEED. An optional
// suffix ",normalized" selects mu = degree.
WeightedGraph generate_graph(const std::string& spec);

// Text format: "n <count>", then "mu <x> <value>" lines, then
// "edge <x> <y> <w>" lines. '#' starts a comment. Vertices without a mu line
// get measure 1. Throws InputError with the offending line number.
WeightedGraph parse_graph(std::istream& in);
WeightedGraph load_graph(const std::string& path);

}  // namespace fraclog
