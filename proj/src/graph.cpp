#include "fraclog/graph.hpp"

#include "fraclog/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <queue>
#include <random>
#include <sstream>

namespace fraclog {

namespace {

void check_vertex(const WeightedGraph& g, Vertex x) {
    if (x >= g.size()) throw InputError("vertex id " + std::to_string(x) + " out of range");
}

}  // namespace

WeightedGraph WeightedGraph::build(std::size_t n, std::span<const Edge> edges, LaplacianKind kind,
                                   std::span<const double> measure, bool allow_loops) {
    if (n == 0) throw InputError("graph must have at least one vertex");
    std::map<std::pair<Vertex, Vertex>, double> weights;
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw InputError("edge endpoint out of range");
        if (!(e.w > 0.0) || !std::isfinite(e.w)) throw InputError("edge weights must be positive");
        if (e.u == e.v && !allow_loops) throw InputError("loop at vertex " + std::to_string(e.u) + " but loops are disabled");
        const auto key = std::minmax(e.u, e.v);
        auto [it, inserted] = weights.emplace(key, e.w);
        if (!inserted && it->second != e.w) {
            throw InputError("asymmetric weights between " + std::to_string(key.first) + " and " +
                             std::to_string(key.second));
        }
    }

    WeightedGraph g;
    g.kind_ = kind;
    g.adjacency_.assign(n, {});
    g.loops_.assign(n, 0.0);
    g.degree_.assign(n, 0.0);
    for (const auto& [key, w] : weights) {
        const auto [a, b] = key;
        if (a == b) {
            g.loops_[a] = w;
            g.has_loops_ = true;
            g.degree_[a] += w;
            continue;
        }
        g.adjacency_[a].push_back({b, w});
        g.adjacency_[b].push_back({a, w});
        g.degree_[a] += w;
        g.degree_[b] += w;
    }
    for (auto& list : g.adjacency_) {
        std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
    }

    switch (kind) {
        case LaplacianKind::standard:
            g.measure_.assign(n, 1.0);
            break;
        case LaplacianKind::normalized:
            g.measure_ = g.degree_;
            break;
        case LaplacianKind::custom:
            if (measure.size() != n) throw InputError("custom measure needs one value per vertex");
            g.measure_.assign(measure.begin(), measure.end());
            break;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!(g.measure_[x] > 0.0) || !std::isfinite(g.measure_[x])) {
            throw InputError("measure must be positive at vertex " + std::to_string(x));
        }
    }
    return g;
}

std::span<const Neighbor> WeightedGraph::neighbors(Vertex x) const {
    check_vertex(*this, x);
    return adjacency_[x];
}

double WeightedGraph::loop_weight(Vertex x) const {
    check_vertex(*this, x);
    return loops_[x];
}

double WeightedGraph::measure(Vertex x) const {
    check_vertex(*this, x);
    return measure_[x];
}

double WeightedGraph::degree(Vertex x) const {
    check_vertex(*this, x);
    return degree_[x];
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    for (Vertex x = 0; x < size(); ++x) {
        if (loops_[x] > 0.0) out.push_back({x, x, loops_[x]});
        for (const Neighbor& nb : adjacency_[x]) {
            if (nb.vertex > x) out.push_back({x, nb.vertex, nb.weight});
        }
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    return out;
}

GraphDiagnostics validate(const WeightedGraph& g) {
    GraphDiagnostics d;
    const auto dist = distances_from(g, 0);
    d.connected = std::all_of(dist.begin(), dist.end(), [](const auto& v) { return v.has_value(); });
    const auto mu = g.measures();
    d.mu_min = *std::min_element(mu.begin(), mu.end());
    d.mu_max = *std::max_element(mu.begin(), mu.end());
    double w_min = std::numeric_limits<double>::infinity();
    bool all_loops = true;
    double alpha = std::numeric_limits<double>::infinity();
    for (Vertex x = 0; x < g.size(); ++x) {
        const double loop = g.loop_weight(x);
        if (loop > 0.0) w_min = std::min(w_min, loop);
        else all_loops = false;
        double incident_min = loop > 0.0 ? loop : std::numeric_limits<double>::infinity();
        for (const Neighbor& nb : g.neighbors(x)) {
            w_min = std::min(w_min, nb.weight);
            incident_min = std::min(incident_min, nb.weight);
        }
        alpha = std::min(alpha, incident_min / g.degree(x));
    }
    d.w_min = std::isfinite(w_min) ? w_min : 0.0;
    if (all_loops) d.delta_alpha = alpha;
    d.locally_finite = true;
    return d;
}

double degree(const WeightedGraph& g, Vertex x) { return g.degree(x); }

std::vector<std::optional<std::size_t>> distances_from(const WeightedGraph& g, Vertex x) {
    check_vertex(g, x);
    std::vector<std::optional<std::size_t>> dist(g.size());
    std::queue<Vertex> frontier;
    dist[x] = 0;
    frontier.push(x);
    while (!frontier.empty()) {
        const Vertex v = frontier.front();
        frontier.pop();
        for (const Neighbor& nb : g.neighbors(v)) {
            if (!dist[nb.vertex]) {
                dist[nb.vertex] = *dist[v] + 1;
                frontier.push(nb.vertex);
            }
        }
    }
    return dist;
}

std::optional<std::size_t> graph_distance(const WeightedGraph& g, Vertex x, Vertex y) {
    check_vertex(g, y);
    return distances_from(g, x)[y];
}

double ball_volume(const WeightedGraph& g, Vertex x, std::size_t r) {
    const auto dist = distances_from(g, x);
    double vol = 0.0;
    for (Vertex y = 0; y < g.size(); ++y) {
        if (dist[y] && *dist[y] <= r) vol += g.measure(y);
    }
    return vol;
}

std::vector<double> laplacian_apply(const WeightedGraph& g, std::span<const double> u) {
    if (u.size() != g.size()) throw InputError("laplacian_apply: function size does not match graph");
    std::vector<double> out(g.size(), 0.0);
    for (Vertex x = 0; x < g.size(); ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * (u[nb.vertex] - u[x]);
        out[x] = acc / g.measure(x);
    }
    return out;
}

std::uint64_t shell_count(int d, int k) {
    if (d < 1 || k < 0) throw InputError("shell_count: need d >= 1 and k >= 0");
    if (k == 0) return 1;
    // Points with l1 norm k: sum over the number j of nonzero coordinates of
    // C(d, j) 2^j C(k-1, j-1).
    std::uint64_t total = 0;
    for (int j = 1; j <= std::min(d, k); ++j) {
        std::uint64_t choose_dj = 1;
        for (int i = 0; i < j; ++i) choose_dj = choose_dj * static_cast<std::uint64_t>(d - i) / static_cast<std::uint64_t>(i + 1);
        std::uint64_t choose_kj = 1;
        for (int i = 0; i < j - 1; ++i) choose_kj = choose_kj * static_cast<std::uint64_t>(k - 1 - i) / static_cast<std::uint64_t>(i + 1);
        total += choose_dj * (std::uint64_t{1} << j) * choose_kj;
    }
    return total;
}

std::uint64_t lattice_ball_count(int d, int r) {
    std::uint64_t total = 0;
    for (int k = 0; k <= r; ++k) total += shell_count(d, k);
    return total;
}

WeightedGraph path_graph(std::size_t n, LaplacianKind kind) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return WeightedGraph::build(n, edges, kind);
}

WeightedGraph cycle_graph(std::size_t n, LaplacianKind kind) {
    if (n < 3) throw InputError("cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return WeightedGraph::build(n, edges, kind);
}

WeightedGraph star_graph(std::size_t leaves, LaplacianKind kind) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
    return WeightedGraph::build(leaves + 1, edges, kind);
}

WeightedGraph random_connected_graph(const RandomGraphOptions& o) {
    if (o.vertices < 2) throw InputError("random graph needs at least 2 vertices");
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> weight(o.weight_min, o.weight_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < o.vertices; ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        edges.push_back({parent(rng), i, weight(rng)});
    }
    for (std::size_t i = 0; i < o.vertices; ++i) {
        for (std::size_t j = i + 1; j < o.vertices; ++j) {
            const double draw = unit(rng);
            const double w = weight(rng);
            const bool tree_edge = std::any_of(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(o.vertices - 1),
                                               [&](const Edge& e) { return e.u == i && e.v == j; });
            if (!tree_edge && draw < o.extra_edge_probability) edges.push_back({i, j, w});
        }
    }
    std::uniform_real_distribution<double> mass(o.measure_min, o.measure_max);
    std::vector<double> mu(o.vertices);
    for (double& m : mu) m = mass(rng);
    return WeightedGraph::build(o.vertices, edges, LaplacianKind::custom, mu);
}

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &pos);
    } catch (const std::exception&) {
        throw InputError("generator: bad " + what + " '" + text + "'");
    }
    if (pos != text.size() || v < 0) throw InputError("generator: bad " + what + " '" + text + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

WeightedGraph generate_graph(const std::string& spec) {
    std::string body = spec;
    LaplacianKind kind = LaplacianKind::standard;
    if (const auto comma = body.find(','); comma != std::string::npos) {
        const std::string suffix = body.substr(comma + 1);
        body = body.substr(0, comma);
        if (suffix == "normalized") kind = LaplacianKind::normalized;
        else if (suffix != "standard") throw InputError("generator: unknown suffix '" + suffix + "'");
    }
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 2) throw InputError("generator: expected name:size, got '" + spec + "'");
    const std::string& name = parts[0];
    const std::size_t n = parse_count(parts[1], "size");
    if (name == "path" && parts.size() == 2) return path_graph(n, kind);
    if (name == "cycle" && parts.size() == 2) return cycle_graph(n, kind);
    if (name == "star" && parts.size() == 2) return star_graph(n, kind);
    if (name == "random" && parts.size() == 3) {
        RandomGraphOptions o;
        o.vertices = n;
        o.seed = parse_count(parts[2], "seed");
        const WeightedGraph g = random_connected_graph(o);
        if (kind == LaplacianKind::normalized) {
            const auto e = g.edges();
            return WeightedGraph::build(g.size(), e, kind);
        }
        return g;
    }
    throw InputError("generator: unknown spec '" + spec + "'");
}

WeightedGraph parse_graph(std::istream& in) {
    std::size_t n = 0;
    bool have_n = false;
    bool allow_loops = false;
    LaplacianKind kind = LaplacianKind::standard;
    bool kind_given = false;
    std::vector<double> mu;
    std::vector<Edge> edges;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) -> InputError {
        return InputError("graph file line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "n") {
            long long v = -1;
            if (have_n || !(ls >> v) || v <= 0) throw fail("expected 'n <count>' once with a positive count");
            n = static_cast<std::size_t>(v);
            have_n = true;
            mu.assign(n, 1.0);
        } else if (key == "kind") {
            std::string k;
            if (!(ls >> k)) throw fail("expected 'kind standard|normalized|custom'");
            if (k == "standard") kind = LaplacianKind::standard;
            else if (k == "normalized") kind = LaplacianKind::normalized;
            else if (k == "custom") kind = LaplacianKind::custom;
            else throw fail("unknown kind '" + k + "'");
            kind_given = true;
        } else if (key == "loops") {
            std::string flag;
            if (!(ls >> flag) || (flag != "on" && flag != "off")) throw fail("expected 'loops on|off'");
            allow_loops = flag == "on";
        } else if (key == "mu") {
            long long x = -1;
            double v = 0.0;
            if (!have_n) throw fail("'mu' before 'n'");
            if (!(ls >> x >> v) || x < 0 || static_cast<std::size_t>(x) >= n) throw fail("expected 'mu <x> <value>' with valid x");
            mu[static_cast<std::size_t>(x)] = v;
            if (!kind_given) kind = LaplacianKind::custom;
        } else if (key == "edge") {
            long long x = -1, y = -1;
            double w = 0.0;
            if (!have_n) throw fail("'edge' before 'n'");
            if (!(ls >> x >> y >> w) || x < 0 || y < 0 || static_cast<std::size_t>(x) >= n ||
                static_cast<std::size_t>(y) >= n) {
                throw fail("expected 'edge <x> <y> <w>' with valid ids");
            }
            edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y), w});
        } else {
            throw fail("unknown directive '" + key + "'");
        }
        std::string extra;
        if (ls >> extra) throw fail("trailing text '" + extra + "'");
    }
    if (!have_n) throw InputError("graph file: missing 'n <count>' header");
    try {
        return WeightedGraph::build(n, edges, kind, mu, allow_loops);
    } catch (const InputError& e) {
        throw InputError(std::string("graph file: ") + e.what());
    }
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file '" + path + "'");
    return parse_graph(in);
}

}  // namespace fraclog
