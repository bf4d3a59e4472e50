#include "run_config.hpp"

#include "fraclog/asymptotics.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/graph.hpp"
#include "fraclog/heat.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/spectral.hpp"
#include "fraclog/suite.hpp"
#include "fraclog/torus.hpp"
#include "fraclog/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace fraclog;

constexpr int exit_failed = 1;
constexpr int exit_input = 2;
constexpr int exit_budget = 3;
constexpr int exit_discrepancy = 4;

struct Common {
    std::string out;
    std::string format = "csv";
};

struct SpectralArgs {
    std::string graph;
    std::string gen;
    std::string op = "frac";
    double s = 0.5;
    double t = 1.0;
    std::string u = "delta:0";
    std::string check = "none";
    std::string mode = "dq";
    std::string s_list = "0.2,0.1,0.05,0.025";
};

struct KernelArgs {
    int d = 1;
    std::string kind = "wlong";
    double s = 0.5;
    int kmax = 10;
    std::string layout = "axis";
    double tol = 1e-11;
};

struct HeatArgs {
    int d = 1;
    std::string t = "0.1,1,10";
    int kmax = 5;
    std::string method = "bessel";
    bool checks = false;
};

struct FourierArgs {
    int d = 1;
    std::string mult = "log_phi";
    double s = 0.5;
    double t = 0.25;
    int kmax = 10;
    std::string layout = "axis";
    int n = 0;
    double delta = 0.5;
    std::string cutoff = "poly_smooth";
};

struct AsymArgs {
    std::string law = "c-const";
    int d = 1;
    double s = 0.5;
    double t = 1.0;
    int k = 1;
    std::string t_list = "100,300,1000,3000,10000";
    std::string k_list = "100,150,200,300,400";
    std::string gap_list = "0.01,0.001,0.0001,0.00001";
    std::string n_list = "64,128,256,512";
    std::string cutoff = "poly_smooth";
};

struct SuiteArgs {
    std::uint64_t seed = SuiteConfig{}.seed;
    int graphs = SuiteConfig{}.graphs;
    int max_vertices = SuiteConfig{}.max_vertices;
    std::string criteria;
};

// A finished run: either a table with comment header or a JSON document.
struct Result {
    std::string text;
    int code = 0;
};

std::string format_double(double x) {
    std::ostringstream o;
    o.precision(17);
    o << x;
    return o.str();
}

using Resolved = std::vector<std::pair<std::string, std::string>>;

Resolved resolved_options(const CLI::App& root, const CLI::App& sub) {
    Resolved out{{"command", sub.get_name()}};
    for (const CLI::App* app : {&root, &sub}) {
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty()) continue;
            const std::string name = opt->get_lnames().front();
            if (name == "help" || name == "version" || name == "out") continue;
            std::string value = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
            if (opt->get_type_size() == 0) value = opt->count() > 0 ? "true" : "false";
            out.emplace_back(name, value);
        }
    }
    return out;
}

std::string csv_header(const Resolved& config) {
    std::ostringstream o;
    o << "# " << version_string << '\n';
    for (const auto& [k, v] : config) o << "# " << k << '=' << v << '\n';
    return o.str();
}

json json_header(const Resolved& config) {
    json doc;
    doc["version"] = version_string;
    json c = json::object();
    for (const auto& [k, v] : config) c[k] = v;
    doc["config"] = c;
    return doc;
}

std::vector<double> lattice_u(const WeightedGraph& g, const std::string& spec) {
    const std::size_t n = g.size();
    std::vector<double> u(n, 0.0);
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "delta") {
        const int v = tail.empty() ? 0 : std::stoi(tail);
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("--u delta vertex out of range");
        u[static_cast<std::size_t>(v)] = 1.0;
    } else if (head == "ones") {
        std::fill(u.begin(), u.end(), 1.0);
    } else if (head == "random") {
        std::mt19937_64 rng(tail.empty() ? 1 : std::stoull(tail));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& x : u) x = dist(rng);
    } else if (head == "values") {
        u = cli::parse_double_list(tail, "--u values");
        if (u.size() != n) throw InputError("--u values: expected " + std::to_string(n) + " entries");
    } else {
        throw InputError("--u: expected delta:V, ones, random:SEED or values:a,b,...");
    }
    return u;
}

Result run_spectral(const SpectralArgs& a, const Common& c, const Resolved& config) {
    if (a.graph.empty() == a.gen.empty()) throw InputError("give exactly one of --graph and --gen");
    const WeightedGraph g = a.graph.empty() ? generate_graph(a.gen) : load_graph(a.graph);
    const std::vector<double> u = lattice_u(g, a.u);
    const SpectralDecomposition dec = decompose(g);

    if (a.op == "probe") {
        ProbeMode mode = ProbeMode::diff_quotient;
        if (a.mode == "s0") mode = ProbeMode::s_to_0;
        else if (a.mode == "s1") mode = ProbeMode::s_to_1;
        else if (a.mode != "dq") throw InputError("--mode must be s0, s1 or dq");
        const std::vector<double> s_list = cli::parse_double_list(a.s_list, "--s-list");
        const std::vector<double> err = convergence_probe_finite(g, u, mode, s_list);
        if (c.format == "json") {
            json doc = json_header(config);
            doc["result"] = {{"s", s_list}, {"error", err}};
            return {doc.dump(2) + "\n"};
        }
        std::ostringstream o;
        o << csv_header(config) << "s,error\n";
        o.precision(17);
        for (std::size_t i = 0; i < s_list.size(); ++i) o << s_list[i] << ',' << err[i] << '\n';
        return {o.str()};
    }

    std::vector<double> value;
    std::vector<double> other;
    if (a.op == "frac") {
        value = frac_laplacian_spectral(dec, a.s, u);
        if (a.check == "bochner") other = bochner_frac(g, a.s, u).value;
    } else if (a.op == "log") {
        value = log_laplacian_spectral(dec, u);
        if (a.check == "bochner") {
            std::vector<double> centred = u;
            const std::vector<double> mean = mean_projection(g, u);
            for (std::size_t v = 0; v < u.size(); ++v) centred[v] -= mean[v];
            other = bochner_log(g, centred).value;
        }
    } else if (a.op == "heat") {
        value = heat_apply(dec, a.t, u);
        if (a.check == "bochner") {
            other = u;
            HeatPropagator(g).advance(other, a.t);
        }
    } else {
        throw InputError("--op must be frac, log, heat or probe");
    }
    if (a.check != "none" && a.check != "bochner") throw InputError("--check must be none or bochner");

    double gap = 0.0;
    for (std::size_t v = 0; v < other.size(); ++v) gap = std::max(gap, std::fabs(other[v] - value[v]));
    if (c.format == "json") {
        json doc = json_header(config);
        json rows = json::array();
        for (std::size_t v = 0; v < value.size(); ++v) {
            json row = {{"vertex", v}, {"u", u[v]}, {"value", value[v]}};
            if (!other.empty()) row["check"] = other[v];
            rows.push_back(row);
        }
        doc["result"] = {{"rows", rows}, {"residual", dec.max_residual}};
        if (!other.empty()) doc["result"]["max_gap"] = gap;
        return {doc.dump(2) + "\n"};
    }
    std::ostringstream o;
    o << csv_header(config) << "vertex,u,value" << (other.empty() ? "" : ",check,gap") << '\n';
    o.precision(17);
    for (std::size_t v = 0; v < value.size(); ++v) {
        o << v << ',' << u[v] << ',' << value[v];
        if (!other.empty()) o << ',' << other[v] << ',' << std::fabs(other[v] - value[v]);
        o << '\n';
    }
    if (!other.empty()) o << "# max_gap=" << gap << '\n';
    return {o.str()};
}

LatticePoint axis(int d, int k) {
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    c[0] = k;
    return LatticePoint(c);
}

Result run_kernel(const KernelArgs& a, const Common& c, const Resolved& config) {
    std::string kind_name = a.kind;
    if (kind_name == "ws") kind_name = "w_s";
    if (kind_name == "wlog") kind_name = "w_log";
    if (kind_name == "wlong") kind_name = "w_long";
    const KernelKind kind = parse_kernel_kind(kind_name);
    if (kind == KernelKind::w_s && !(a.s > 0.0 && a.s < 1.0)) throw InputError("--s must lie in (0, 1)");
    if (a.kmax < 1) throw InputError("--kmax must be positive");
    KernelCache cache(a.d, a.tol);
    KernelTable table;
    if (a.layout == "ball") {
        table = build_kernel_table(cache, kind, a.s, a.kmax);
    } else if (a.layout == "axis") {
        table.kind = kind;
        table.d = a.d;
        table.s = kind == KernelKind::w_s ? a.s : 0.0;
        table.radius = a.kmax;
        for (int k = 1; k <= a.kmax; ++k) table.entries.emplace_back(axis(a.d, k), cache.get(kind, a.s, axis(a.d, k)));
    } else {
        throw InputError("--layout must be axis or ball");
    }

    json checks = json::object();
    if (a.layout == "axis" && kind == KernelKind::w_long && a.kmax >= 7) {
        std::vector<double> x, y;
        for (const auto& [k, e] : table.entries) {
            if (k.l1() < 5) continue;
            x.push_back(std::log(k.l1()));
            y.push_back(std::log(e.value));
        }
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        const double slope = sxy / sxx;
        checks = {{"tail_slope", slope}, {"target", -a.d}, {"pass", std::fabs(slope + a.d) <= 0.15}};
    }
    if (a.layout == "axis" && kind == KernelKind::w_log) {
        double top = 0.0;
        for (const auto& [k, e] : table.entries) top = std::max(top, e.value * std::pow(k.l1(), k.l1() + 1.0) * std::exp(-k.l1()));
        checks = {{"superexponential_ratio_max", top}};
    }
    double worst_err = 0.0;
    bool positive = true;
    for (const auto& [k, e] : table.entries) {
        worst_err = std::max(worst_err, e.error_estimate);
        positive = positive && e.value > 0.0;
    }
    checks["positive"] = positive;
    checks["max_err_est"] = worst_err;

    if (c.format == "json") {
        json doc = json_header(config);
        json rows = json::array();
        for (const auto& [k, e] : table.entries) rows.push_back({{"k", k.coords()}, {"value", e.value}, {"err_est", e.error_estimate}});
        doc["result"] = {{"rows", rows}, {"checks", checks}};
        return {doc.dump(2) + "\n"};
    }
    std::ostringstream o;
    o << csv_header(config);
    write_kernel_csv(o, table);
    for (const auto& [k, v] : checks.items()) o << "# check " << k << '=' << v.dump() << '\n';
    return {o.str()};
}

Result run_heat(const HeatArgs& a, const Common& c, const Resolved& config) {
    const std::vector<double> t_list = cli::parse_double_list(a.t, "--t");
    if (a.kmax < 0) throw InputError("--kmax must be nonnegative");
    std::vector<HeatSweepRow> rows;
    const std::vector<LatticePoint> offsets = linf_box(a.d, a.kmax);
    for (double t : t_list) {
        if (a.method == "bessel") {
            for (const auto& k : offsets) rows.push_back({t, k, heat_kernel_zd(a.d, t, k)});
        } else if (a.method == "fourier") {
            for (const auto& k : offsets) rows.push_back({t, k, heat_kernel_fourier(a.d, t, k)});
        } else if (a.method == "window") {
            const LatticePoint origin = LatticePoint::origin(a.d);
            int radius = 1;
            for (const auto& k : offsets) radius = std::max(radius, window_radius_for(a.d, t, origin, k));
            const WindowHeatKernel kernel{WindowLattice(a.d, radius)};
            for (const auto& k : offsets) rows.push_back({t, k, kernel(t, origin, k)});
        } else {
            throw InputError("--method must be bessel, fourier or window");
        }
    }
    json checks = json::array();
    bool checks_pass = true;
    if (a.checks) {
        std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
        const LatticePoint origin = LatticePoint::origin(a.d);
        for (const auto& k : offsets) {
            if (!k.is_origin() && k.l1() <= 2) pairs.emplace_back(origin, k);
        }
        std::vector<double> grid;
        for (double t : t_list) {
            if (t > 0.0 && t <= 1.0) grid.push_back(t);
        }
        const DerivativeReport report = derivative_identity_checks(a.d, pairs, grid);
        for (const auto& ch : report.checks) {
            checks.push_back({{"name", ch.name}, {"where", ch.where}, {"measured", ch.measured}, {"target", ch.target},
                              {"margin", ch.margin}, {"pass", ch.pass}});
        }
        checks_pass = report.all_pass();
    }
    if (c.format == "json") {
        json doc = json_header(config);
        json out = json::array();
        for (const auto& r : rows) {
            out.push_back({{"t", r.t}, {"k", r.k.coords()}, {"value", r.eval.value}, {"method", to_string(r.eval.method)},
                           {"err_est", r.eval.error_estimate}});
        }
        doc["result"] = {{"rows", out}};
        if (a.checks) doc["result"]["checks"] = checks;
        return {doc.dump(2) + "\n", checks_pass ? 0 : exit_failed};
    }
    std::ostringstream o;
    o << csv_header(config);
    write_heat_csv(o, a.d, rows);
    for (const auto& ch : checks) {
        o << "# check " << ch["name"].get<std::string>() << ' ' << ch["where"].get<std::string>() << " measured="
          << format_double(ch["measured"].get<double>()) << " pass=" << (ch["pass"].get<bool>() ? "true" : "false") << '\n';
    }
    return {o.str(), checks_pass ? 0 : exit_failed};
}

Result run_fourier(const FourierArgs& a, const Common& c, const Resolved& config) {
    Multiplier m = Multiplier::log_phi();
    if (a.mult == "phi_power") m = Multiplier::phi_power(a.s);
    else if (a.mult == "exp") m = Multiplier::exp_minus_t_phi_power(a.t, a.s);
    else if (a.mult == "phi_minus_t") m = Multiplier::phi_minus_t(a.t);
    else if (a.mult != "log_phi") throw InputError("--mult must be phi_power, log_phi, exp or phi_minus_t");
    if (a.mult == "phi_minus_t" && !(a.t < 0.5 * a.d)) throw LifespanError("phi_minus_t needs t < d/2");
    TorusQuadratureSpec q;
    q.points_per_dim = a.n;
    q.split_radius = a.delta;
    q.cutoff = parse_cutoff(a.cutoff);
    MultiplierKernel kernel(a.d, m, q);
    std::vector<LatticePoint> offsets;
    if (a.layout == "axis") {
        for (int k = 0; k <= a.kmax; ++k) offsets.push_back(axis(a.d, k));
    } else if (a.layout == "ball") {
        offsets = l1_ball(a.d, a.kmax);
    } else {
        throw InputError("--layout must be axis or ball");
    }
    std::vector<KernelValue> values;
    for (const auto& k : offsets) values.push_back(kernel(k));
    if (c.format == "json") {
        json doc = json_header(config);
        json rows = json::array();
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            rows.push_back({{"k", offsets[i].coords()}, {"value", values[i].value}, {"err_est", values[i].error_estimate}});
        }
        doc["result"] = {{"multiplier", m.describe()}, {"rows", rows}};
        return {doc.dump(2) + "\n"};
    }
    std::ostringstream o;
    o << csv_header(config) << "multiplier,d";
    for (int j = 1; j <= a.d; ++j) o << ",k" << j;
    o << ",value,err_est\n";
    o.precision(17);
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        o << m.describe() << ',' << a.d;
        for (int j = 0; j < a.d; ++j) o << ',' << offsets[i][j];
        o << ',' << values[i].value << ',' << values[i].error_estimate << '\n';
    }
    return {o.str()};
}

json law_json(const LawReport& r) {
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    return {{"law", r.law},
            {"parameters", params},
            {"x", r.x},
            {"y", r.y},
            {"exponent", r.fit.exponent},
            {"constant", r.fit.constant},
            {"reference_exponent", r.reference_exponent},
            {"reference_constant", r.reference_constant},
            {"exponent_err", r.exponent_err},
            {"rel_err", r.rel_err},
            {"r_squared", r.fit.r_squared},
            {"window", {r.fit.window_lo, r.fit.window_hi}},
            {"pass", r.pass}};
}

Result run_asym(const AsymArgs& a, const Resolved& config) {
    json doc = json_header(config);
    int code = 0;
    if (a.law == "c-const") {
        const double value = c_sd(a.s, a.d);
        doc["result"] = {{"law", "c_const"}, {"parameters", {{"d", a.d}, {"s", a.s}}}, {"constant", value}};
    } else if (a.law == "a-const") {
        const std::vector<double> n = cli::parse_double_list(a.n_list, "--n-list");
        const CutoffLimit lim = a_sd(a.s, a.d, {parse_cutoff(a.cutoff), n});
        json result = {{"law", "a_const"},
                       {"parameters", {{"d", a.d}, {"s", a.s}, {"cutoff", a.cutoff}}},
                       {"n", lim.n},
                       {"partial", lim.partial},
                       {"constant", lim.value},
                       {"richardson", lim.richardson},
                       {"stability", lim.stability}};
        const CutoffReport rep = a_sd_report(a.s, a.d, n);
        result["family_gap"] = rep.family_gap;
        result["direction_gap"] = rep.direction_gap;
        result["pass"] = rep.pass;
        if (a.d == 1) result["by_parts"] = cutoff_integral_by_parts(a.s, n.back());
        doc["result"] = result;
        if (!rep.pass) code = exit_failed;
    } else if (a.law == "large-time") {
        const LawReport r = large_time_fit(a.d, a.s, cli::parse_double_list(a.t_list, "--t-list"));
        doc["result"] = law_json(r);
        if (!r.pass) code = exit_failed;
    } else if (a.law == "tail-ps") {
        const LawReport r = tail_fit_ps(a.d, a.s, a.t, cli::parse_int_list(a.k_list, "--k-list"));
        doc["result"] = law_json(r);
        if (!r.pass) code = exit_failed;
    } else if (a.law == "tail-plog") {
        const LawReport r = tail_fit_plog(a.d, a.t, cli::parse_int_list(a.k_list, "--k-list"));
        doc["result"] = law_json(r);
        if (!r.pass) code = exit_failed;
    } else if (a.law == "blowup") {
        const BlowupReport r = blowup_fit_plog(a.d, axis(a.d, a.k), cli::parse_double_list(a.gap_list, "--gap-list"));
        doc["result"] = {{"law", "blowup"},
                         {"parameters", {{"d", a.d}, {"k", a.k}}},
                         {"gap", r.gap},
                         {"product", r.product},
                         {"constant", r.limit},
                         {"sphere", r.sphere},
                         {"sphere_normalized", r.sphere_normalized},
                         {"rel_err_sphere", r.rel_err_sphere},
                         {"rel_err_sphere_normalized", r.rel_err_normalized},
                         {"matches", r.matches},
                         {"increasing", r.increasing},
                         {"discrepancy", r.discrepancy},
                         {"note", r.note}};
        if (r.discrepancy) code = exit_discrepancy;
    } else {
        throw InputError("--law must be large-time, tail-ps, blowup, tail-plog, a-const or c-const");
    }
    return {doc.dump(2) + "\n", code};
}

Result run_suite_command(const SuiteArgs& a, const Resolved& config) {
    SuiteConfig sc;
    sc.seed = a.seed;
    sc.graphs = a.graphs;
    sc.max_vertices = a.max_vertices;
    if (!a.criteria.empty()) sc.criteria = cli::parse_int_list(a.criteria, "--criteria");
    const SuiteReport report = run_suite(sc);
    json doc = json_header(config);
    doc["result"] = to_json(report, sc);
    int code = 0;
    if (!report.all_pass) code = exit_failed;
    else if (report.discrepancy) code = exit_discrepancy;
    return {doc.dump(2) + "\n", code};
}

void emit(const Result& r, const Common& c) {
    if (c.out.empty() || c.out == "-") {
        std::cout << r.text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + c.out + "'");
    f << r.text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional and logarithmic Laplacians on weighted graphs and lattices", "fraclog"};
    app.set_version_flag("--version", version_string);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out, "Output file (default stdout)");
    app.add_option("--format", common.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    std::string config_path;
    app.add_option("--config", config_path, "Flat key=value file; command-line flags take precedence");

    SpectralArgs sp;
    CLI::App* spectral = app.add_subcommand("spectral", "Spectral calculus on a finite graph");
    spectral->add_option("--graph", sp.graph, "Graph file");
    spectral->add_option("--gen", sp.gen, "Generator: path:N, cycle:N, star:L, random:N:SEED[,normalized]");
    spectral->add_option("--op", sp.op, "frac, log, heat or probe");
    spectral->add_option("--s", sp.s, "Fractional order");
    spectral->add_option("--t", sp.t, "Heat time");
    spectral->add_option("--u", sp.u, "Input: delta:V, ones, random:SEED, values:a,b,...");
    spectral->add_option("--check", sp.check, "none or bochner");
    spectral->add_option("--mode", sp.mode, "Probe mode: s0, s1, dq");
    spectral->add_option("--s-list", sp.s_list, "Probe orders");

    KernelArgs kp;
    CLI::App* kernel = app.add_subcommand("kernel", "Lattice kernels W_s, W_log, W");
    kernel->add_option("--d", kp.d, "Dimension (1-3)");
    kernel->add_option("--kind", kp.kind, "ws, wlog or wlong");
    kernel->add_option("--s", kp.s, "Order for ws");
    kernel->add_option("--kmax", kp.kmax, "Largest offset");
    kernel->add_option("--layout", kp.layout, "axis (k e_1, k = 1..kmax) or ball (|k|_1 <= kmax)");
    kernel->add_option("--tol", kp.tol, "Absolute tolerance");

    HeatArgs hp;
    CLI::App* heat = app.add_subcommand("heat", "Lattice heat kernel");
    heat->add_option("--d", hp.d, "Dimension (1-3)");
    heat->add_option("--t", hp.t, "Times, comma separated");
    heat->add_option("--kmax", hp.kmax, "Sup-norm radius of offsets");
    heat->add_option("--method", hp.method, "bessel, fourier or window");
    heat->add_flag("--checks", hp.checks, "Append small-time derivative identity checks");

    FourierArgs fp;
    CLI::App* fourier = app.add_subcommand("fourier", "Fourier multiplier kernels on Z^d");
    fourier->add_option("--d", fp.d, "Dimension (1-3)");
    fourier->add_option("--mult", fp.mult, "phi_power, log_phi, exp or phi_minus_t");
    fourier->add_option("--s", fp.s, "Power");
    fourier->add_option("--t", fp.t, "Time");
    fourier->add_option("--kmax", fp.kmax, "Largest offset");
    fourier->add_option("--layout", fp.layout, "axis or ball");
    fourier->add_option("--n", fp.n, "Grid points per dimension (0 = default)");
    fourier->add_option("--delta", fp.delta, "Singular split radius");
    fourier->add_option("--cutoff", fp.cutoff, "poly_smooth or exp_bump");

    AsymArgs ap;
    CLI::App* asym = app.add_subcommand("asym", "Asymptotic laws and constants (JSON)");
    asym->add_option("--law", ap.law, "large-time, tail-ps, blowup, tail-plog, a-const, c-const");
    asym->add_option("--d", ap.d, "Dimension");
    asym->add_option("--s", ap.s, "Order");
    asym->add_option("--t", ap.t, "Time");
    asym->add_option("--k", ap.k, "Offset along e_1 (blowup)");
    asym->add_option("--t-list", ap.t_list, "Times (large-time)");
    asym->add_option("--k-list", ap.k_list, "Offsets (tails)");
    asym->add_option("--gap-list", ap.gap_list, "Values of d - 2t (blowup)");
    asym->add_option("--n-list", ap.n_list, "Cutoff scales (a-const)");
    asym->add_option("--cutoff", ap.cutoff, "poly_smooth or exp_bump");

    SuiteArgs su;
    CLI::App* suite = app.add_subcommand("suite", "Deterministic acceptance battery (JSON)");
    suite->add_option("--seed", su.seed, "Seed for graphs and inputs");
    suite->add_option("--graphs", su.graphs, "Number of random graphs");
    suite->add_option("--max-vertices", su.max_vertices, "Largest random graph");
    suite->add_option("--criteria", su.criteria, "Subset, comma separated (default all)");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = fraclog::cli::merge_config(args, {"spectral", "kernel", "heat", "fourier", "asym", "suite"});
        std::vector<const char*> raw;
        for (const auto& s : args) raw.push_back(s.c_str());
        try {
            app.parse(static_cast<int>(raw.size()), raw.data());
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? 0 : exit_input;
        }

        CLI::App* chosen = app.get_subcommands().front();
        const Resolved config = resolved_options(app, *chosen);
        Result result;
        if (chosen == spectral) result = run_spectral(sp, common, config);
        else if (chosen == kernel) result = run_kernel(kp, common, config);
        else if (chosen == heat) result = run_heat(hp, common, config);
        else if (chosen == fourier) result = run_fourier(fp, common, config);
        else if (chosen == asym) result = run_asym(ap, config);
        else result = run_suite_command(su, config);
        emit(result, common);
        return result.code;
    } catch (const fraclog::BudgetError& e) {
        std::cerr << "fraclog: " << e.what() << '\n';
        return exit_budget;
    } catch (const fraclog::InputError& e) {
        std::cerr << "fraclog: " << e.what() << '\n';
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fraclog: invalid value: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "fraclog: " << e.what() << '\n';
        return exit_failed;
    }
}
