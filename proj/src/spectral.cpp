#include "fraclog/spectral.hpp"

#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fraclog {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void check_size(const WeightedGraph& g, std::span<const double> u) {
    if (u.size() != g.size()) throw InputError("function size does not match the graph");
}

double sup_norm(std::span<const double> u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

// Symmetrized -Delta: M^{-1/2} (D - W) M^{-1/2}, loops dropped (they do not
// contribute to Delta).
Eigen::MatrixXd symmetrized_operator(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Vertex x = 0; x < g.size(); ++x) {
        double off = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) {
            off += nb.weight;
            b(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(nb.vertex)) =
                -nb.weight / std::sqrt(g.measure(x) * g.measure(nb.vertex));
        }
        b(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = off / g.measure(x);
    }
    return b;
}

double spectral_gap(const WeightedGraph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_operator(g), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw BudgetError("eigenvalue solver failed while bounding the spectral gap");
    const auto& ev = solver.eigenvalues();
    const double zero_tol = 1e-10 * std::max(1.0, ev(ev.size() - 1));
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
        if (ev(j) > zero_tol) return ev(j);
    }
    throw InputError("operator has no positive eigenvalue");
}

}  // namespace

double inner_product(std::span<const double> mu, std::span<const double> u, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += mu[i] * u[i] * v[i];
    return acc;
}

double norm_l2(std::span<const double> mu, std::span<const double> u) { return std::sqrt(inner_product(mu, u, u)); }

SpectralDecomposition decompose(const WeightedGraph& g) {
    const Eigen::MatrixXd b = symmetrized_operator(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) throw BudgetError("eigensolver did not converge");
    SpectralDecomposition dec;
    const auto n = b.rows();
    const auto mu = g.measures();
    dec.measure.assign(mu.begin(), mu.end());
    dec.eigenvalues.resize(static_cast<std::size_t>(n));
    dec.eigenvectors = solver.eigenvectors();
    const double zero_tol = 1e-10 * std::max(1.0, solver.eigenvalues()(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        double lam = solver.eigenvalues()(j);
        if (lam < zero_tol) {
            lam = 0.0;
            ++dec.zero_modes;
        }
        dec.eigenvalues[static_cast<std::size_t>(j)] = lam;
    }
    for (Eigen::Index x = 0; x < n; ++x) dec.eigenvectors.row(x) /= std::sqrt(mu[static_cast<std::size_t>(x)]);
    // Sign convention: each eigenvector has a positive first nonzero entry.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index x = 0; x < n; ++x) {
            if (std::abs(dec.eigenvectors(x, j)) > 1e-12) {
                if (dec.eigenvectors(x, j) < 0) dec.eigenvectors.col(j) *= -1.0;
                break;
            }
        }
    }
    // Residual of -Delta phi = lambda phi in the unsymmetrized form.
    for (Eigen::Index j = 0; j < n; ++j) {
        const std::vector<double> phi = to_std(dec.eigenvectors.col(j));
        const std::vector<double> lap = laplacian_apply(g, phi);
        double res = 0.0;
        for (std::size_t x = 0; x < phi.size(); ++x) {
            const double r = -lap[x] - dec.eigenvalues[static_cast<std::size_t>(j)] * phi[x];
            res += r * r;
        }
        dec.max_residual = std::max(dec.max_residual, std::sqrt(res) / (1.0 + dec.eigenvalues[static_cast<std::size_t>(j)]));
    }
    if (dec.max_residual > 1e-9) {
        throw BudgetError("eigensolver residual " + std::to_string(dec.max_residual) + " exceeds 1e-9");
    }
    return dec;
}

std::vector<double> apply_function(const SpectralDecomposition& dec, const std::function<double(double)>& f,
                                   std::span<const double> u, ZeroMode zero) {
    if (u.size() != dec.measure.size()) throw InputError("function size does not match the decomposition");
    const auto n = dec.eigenvectors.rows();
    Eigen::VectorXd weighted(n);
    for (Eigen::Index x = 0; x < n; ++x) weighted(x) = dec.measure[static_cast<std::size_t>(x)] * u[static_cast<std::size_t>(x)];
    const Eigen::VectorXd coef = dec.eigenvectors.transpose() * weighted;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double lam = dec.eigenvalues[static_cast<std::size_t>(j)];
        if (zero == ZeroMode::skip && lam == 0.0) continue;
        const double fl = f(lam);
        if (!std::isfinite(fl)) throw InputError("spectral function undefined at eigenvalue " + std::to_string(lam));
        out += (fl * coef(j)) * dec.eigenvectors.col(j);
    }
    return to_std(out);
}

std::vector<double> frac_laplacian_spectral(const SpectralDecomposition& dec, double s, std::span<const double> u) {
    if (!(s > 0.0 && s <= 1.0)) throw InputError("fractional order must lie in (0, 1]");
    return apply_function(dec, [s](double lam) { return std::pow(lam, s); }, u, ZeroMode::skip);
}

std::vector<double> log_laplacian_spectral(const SpectralDecomposition& dec, std::span<const double> u) {
    if (dec.zero_modes != 1) throw InputError("logarithmic Laplacian needs a connected graph (simple zero eigenvalue)");
    return apply_function(dec, [](double lam) { return std::log(lam); }, u, ZeroMode::skip);
}

std::vector<double> heat_apply(const SpectralDecomposition& dec, double t, std::span<const double> u) {
    if (!(t >= 0.0)) throw InputError("heat_apply: t must be nonnegative");
    if (t == 0.0) return {u.begin(), u.end()};
    return apply_function(dec, [t](double lam) { return std::exp(-t * lam); }, u, ZeroMode::include);
}

std::vector<double> mean_projection(const WeightedGraph& g, std::span<const double> u) {
    check_size(g, u);
    const auto mu = g.measures();
    const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
    double mass = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) mass += mu[x] * u[x];
    return std::vector<double>(u.size(), mass / total);
}

HeatPropagator::HeatPropagator(const WeightedGraph& g) {
    row_start_.push_back(0);
    diag_.resize(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        double out_weight = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) {
            col_.push_back(nb.vertex);
            val_.push_back(nb.weight / g.measure(x));
            out_weight += nb.weight;
        }
        row_start_.push_back(col_.size());
        diag_[x] = -out_weight / g.measure(x);
        norm_bound_ = std::max(norm_bound_, 2.0 * out_weight / g.measure(x));
    }
}

void HeatPropagator::apply_laplacian(std::span<const double> in, std::span<double> out) const {
    for (std::size_t x = 0; x + 1 < row_start_.size(); ++x) {
        double acc = diag_[x] * in[x];
        for (std::size_t k = row_start_[x]; k < row_start_[x + 1]; ++k) acc += val_[k] * in[col_[k]];
        out[x] = acc;
    }
}

void HeatPropagator::advance(std::vector<double>& v, double dt) const {
    if (dt <= 0.0) return;
    const int steps = std::max(1, static_cast<int>(std::ceil(dt * norm_bound_)));
    const double h = dt / steps;
    std::vector<double> term(v.size()), next(v.size());
    for (int step = 0; step < steps; ++step) {
        term = v;
        const double base = std::max(sup_norm(v), 1e-300);
        for (int k = 1; k < 60; ++k) {
            apply_laplacian(term, next);
            const double c = h / k;
            double tn = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                term[i] = c * next[i];
                v[i] += term[i];
                tn = std::max(tn, std::abs(term[i]));
            }
            if (tn <= 1e-18 * base) break;
        }
    }
}

namespace {

// Integrand in the log-time variable tau = log t; receives t and e^{t Delta}v.
using HeatIntegrand = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& heat)>;

struct VectorPanel {
    double a = 0.0;
    double b = 0.0;
    Eigen::VectorXd value;
    double error = 0.0;
};

// Globally adaptive Gauss-Kronrod in tau over [lo, hi]. Every round evaluates
// the pending panels in one sweep of increasing t so the heat flow is advanced
// monotonically.
QuadratureResult integrate_heat_flow(const HeatPropagator& heat, const std::vector<double>& v, double lo, double hi,
                                     const std::vector<double>& extra_breaks, const HeatIntegrand& f, double tol,
                                     int max_rounds, Eigen::VectorXd& result) {
    const KronrodRule& rule = kronrod21();
    std::vector<double> breaks{lo};
    for (double x : extra_breaks) {
        if (x > lo && x < hi) breaks.push_back(x);
    }
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> refined{breaks.front()};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((breaks[i + 1] - breaks[i]) / 0.5)));
        for (int p = 1; p <= pieces; ++p) refined.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * p / pieces);
    }

    std::vector<VectorPanel> done;
    std::vector<std::pair<double, double>> pending;
    for (std::size_t i = 0; i + 1 < refined.size(); ++i) pending.emplace_back(refined[i], refined[i + 1]);
    std::size_t evaluations = 0;
    const auto n = static_cast<Eigen::Index>(v.size());

    for (int round = 0; round < max_rounds; ++round) {
        struct Node {
            double tau;
            std::size_t panel;
            int slot;  // 0 centre, +i / -i
        };
        std::vector<Node> nodes;
        for (std::size_t p = 0; p < pending.size(); ++p) {
            const double mid = 0.5 * (pending[p].first + pending[p].second);
            const double half = 0.5 * (pending[p].second - pending[p].first);
            nodes.push_back({mid, p, 0});
            for (int i = 1; i < 11; ++i) {
                nodes.push_back({mid + half * rule.abscissa[static_cast<std::size_t>(i)], p, i});
                nodes.push_back({mid - half * rule.abscissa[static_cast<std::size_t>(i)], p, -i});
            }
        }
        std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.tau < y.tau; });
        std::vector<Eigen::VectorXd> kron(pending.size(), Eigen::VectorXd::Zero(n));
        std::vector<Eigen::VectorXd> gauss(pending.size(), Eigen::VectorXd::Zero(n));
        std::vector<double> state = v;
        double t_now = 0.0;
        for (const Node& node : nodes) {
            const double t = std::exp(node.tau);
            heat.advance(state, t - t_now);
            t_now = t;
            const Eigen::VectorXd fx = f(t, Eigen::Map<const Eigen::VectorXd>(state.data(), n));
            const auto idx = static_cast<std::size_t>(std::abs(node.slot));
            kron[node.panel] += rule.kronrod_weight[idx] * fx;
            gauss[node.panel] += rule.gauss_weight[idx] * fx;
            ++evaluations;
        }
        for (std::size_t p = 0; p < pending.size(); ++p) {
            const double half = 0.5 * (pending[p].second - pending[p].first);
            VectorPanel panel;
            panel.a = pending[p].first;
            panel.b = pending[p].second;
            panel.value = half * kron[p];
            panel.error = (half * (kron[p] - gauss[p])).lpNorm<Eigen::Infinity>();
            done.push_back(std::move(panel));
        }
        pending.clear();
        std::sort(done.begin(), done.end(), [](const VectorPanel& x, const VectorPanel& y) { return x.a < y.a; });
        double total_error = 0.0;
        for (const auto& p : done) total_error += p.error;
        if (total_error <= tol) {
            result = Eigen::VectorXd::Zero(n);
            for (const auto& p : done) result += p.value;
            return {0.0, total_error, evaluations};
        }
        // Split the worst panels until the remaining error would meet half the tolerance.
        std::vector<std::size_t> order(done.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return done[x].error > done[y].error; });
        double remaining = total_error;
        std::vector<bool> split(done.size(), false);
        for (std::size_t i : order) {
            if (remaining <= 0.5 * tol) break;
            split[i] = true;
            remaining -= done[i].error;
        }
        std::vector<VectorPanel> keep;
        for (std::size_t i = 0; i < done.size(); ++i) {
            if (split[i]) {
                const double mid = 0.5 * (done[i].a + done[i].b);
                pending.emplace_back(done[i].a, mid);
                pending.emplace_back(mid, done[i].b);
            } else {
                keep.push_back(std::move(done[i]));
            }
        }
        done = std::move(keep);
    }
    throw BudgetError("time quadrature did not reach tolerance " + std::to_string(tol) + " within the round budget");
}

// Shared setup for the two Bochner routes: mean-free part, truncation time, and
// the Taylor window near t = 0.
struct BochnerSetup {
    std::vector<double> v;  // mean-free part of u
    double v_norm = 0.0;    // l^2(mu)
    double tol = 0.0;
    double gap = 0.0;
    double eps = 0.0;  // Taylor window (0, eps]
    double t_max = 0.0;
};

BochnerSetup prepare(const WeightedGraph& g, std::span<const double> u, const TimeQuadratureSpec& q,
                     const HeatPropagator& heat, double decay_floor) {
    if (!(q.split_point > 0.0)) throw InputError("split point must be positive");
    if (q.tail != TailBound::spectral_gap) throw InputError("finite graphs use the spectral-gap tail bound");
    if (q.t_max != 0.0 && q.t_max < q.split_point) throw InputError("T_max must be at least the split point");
    BochnerSetup st;
    const std::vector<double> mean = mean_projection(g, u);
    st.v.resize(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) st.v[x] = u[x] - mean[x];
    st.v_norm = norm_l2(g.measures(), st.v);
    st.tol = q.tolerance * std::max(1.0, sup_norm(u));
    st.gap = spectral_gap(g);
    const double rate = std::min(st.gap, decay_floor);
    st.t_max = q.t_max > 0.0 ? q.t_max
                             : std::max(q.split_point, std::log(std::max(st.v_norm, 1.0) / (0.01 * st.tol)) / rate);
    st.eps = std::min(q.split_point, 0.5 / std::max(heat.operator_norm_bound(), 1e-300));
    return st;
}

// Powers Delta^m v for m = 1..terms.
std::vector<std::vector<double>> laplacian_powers(const HeatPropagator& heat, const std::vector<double>& v, int terms) {
    std::vector<std::vector<double>> out;
    std::vector<double> cur = v;
    for (int m = 1; m <= terms; ++m) {
        std::vector<double> next(v.size());
        heat.apply_laplacian(cur, next);
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

}  // namespace

BochnerResult bochner_frac(const WeightedGraph& g, double s, std::span<const double> u, const TimeQuadratureSpec& q) {
    check_size(g, u);
    if (!(s > 0.0 && s < 1.0)) throw InputError("bochner_frac: s must lie in (0, 1)");
    const HeatPropagator heat(g);
    const BochnerSetup st = prepare(g, u, q, heat, std::numeric_limits<double>::infinity());
    const auto n = static_cast<Eigen::Index>(u.size());
    BochnerResult out;
    out.t_max = st.t_max;
    if (st.v_norm == 0.0) {
        out.value.assign(u.size(), 0.0);
        return out;
    }

    // (0, eps]: u - e^{t Delta} u = -sum_{m>=1} t^m Delta^m v / m!.
    Eigen::VectorXd near = Eigen::VectorXd::Zero(n);
    {
        constexpr int terms = 40;
        const auto powers = laplacian_powers(heat, st.v, terms);
        double fact = 1.0;
        for (int m = 1; m <= terms; ++m) {
            fact *= m;
            const double w = -std::pow(st.eps, m - s) / ((m - s) * fact);
            near += w * Eigen::Map<const Eigen::VectorXd>(powers[static_cast<std::size_t>(m - 1)].data(), n);
        }
    }

    // [eps, T]: tau = log t. Below the split the integrand is (v - e^{t Delta} v) t^{-s};
    // above it the constant part v t^{-1-s} is integrated exactly.
    const double split = q.split_point;
    const Eigen::VectorXd vv = Eigen::Map<const Eigen::VectorXd>(st.v.data(), n);
    const HeatIntegrand f = [&](double t, const Eigen::VectorXd& h) -> Eigen::VectorXd {
        const double w = std::pow(t, -s);
        if (t < split) return w * (vv - h);
        return -w * h;
    };
    Eigen::VectorXd middle;
    const QuadratureResult qr = integrate_heat_flow(heat, st.v, std::log(st.eps), std::log(st.t_max), {std::log(split)}, f,
                                                    0.5 * st.tol * std::tgamma(1.0 - s) / s, q.max_rounds, middle);
    const Eigen::VectorXd exact_tail = vv * (std::pow(split, -s) / s);
    const double trunc = st.v_norm * std::exp(-st.gap * st.t_max) * std::pow(st.t_max, -1.0 - s) / st.gap;

    const double pref = s / std::tgamma(1.0 - s);
    const Eigen::VectorXd total = pref * (near + middle + exact_tail);
    out.value = to_std(total);
    out.error_estimate = pref * (qr.abs_error_estimate + trunc);
    out.evaluations = qr.evaluations;
    if (out.error_estimate > st.tol) throw BudgetError("bochner_frac: error estimate above tolerance");
    return out;
}

BochnerResult bochner_log(const WeightedGraph& g, std::span<const double> u, const TimeQuadratureSpec& q) {
    check_size(g, u);
    const auto mu = g.measures();
    const double total_mass = std::accumulate(mu.begin(), mu.end(), 0.0);
    double mass = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) mass += mu[x] * u[x];
    const double phi0_coef = mass / std::sqrt(total_mass);
    if (std::abs(phi0_coef) > 1e-12 * std::max(1.0, norm_l2(mu, u))) {
        throw InputError("bochner_log: input must be mean-zero in l^2(V, mu); constant component " + std::to_string(phi0_coef));
    }
    const HeatPropagator heat(g);
    const BochnerSetup st = prepare(g, u, q, heat, 1.0);
    const auto n = static_cast<Eigen::Index>(u.size());
    BochnerResult out;
    out.t_max = st.t_max;
    if (st.v_norm == 0.0) {
        out.value.assign(u.size(), 0.0);
        return out;
    }
    const Eigen::VectorXd vv = Eigen::Map<const Eigen::VectorXd>(st.v.data(), n);

    // (0, eps]: (e^{-t} v - e^{t Delta} v)/t = sum_{m>=1} t^{m-1} ((-1)^m v - Delta^m v)/m!.
    Eigen::VectorXd near = Eigen::VectorXd::Zero(n);
    {
        constexpr int terms = 40;
        const auto powers = laplacian_powers(heat, st.v, terms);
        double fact = 1.0;
        for (int m = 1; m <= terms; ++m) {
            fact *= m;
            const double w = std::pow(st.eps, m) / (m * fact);
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            near += w * (sign * vv - Eigen::Map<const Eigen::VectorXd>(powers[static_cast<std::size_t>(m - 1)].data(), n));
        }
    }
    const HeatIntegrand f = [&](double t, const Eigen::VectorXd& h) -> Eigen::VectorXd { return std::exp(-t) * vv - h; };
    Eigen::VectorXd middle;
    const QuadratureResult qr = integrate_heat_flow(heat, st.v, std::log(st.eps), std::log(st.t_max),
                                                    {std::log(q.split_point)}, f, 0.5 * st.tol, q.max_rounds, middle);
    const double trunc = st.v_norm * (std::exp(-st.t_max) / st.t_max + std::exp(-st.gap * st.t_max) / (st.gap * st.t_max));
    out.value = to_std(near + middle);
    out.error_estimate = qr.abs_error_estimate + trunc;
    out.evaluations = qr.evaluations;
    if (out.error_estimate > st.tol) throw BudgetError("bochner_log: error estimate above tolerance");
    return out;
}

std::vector<double> convergence_probe_finite(const WeightedGraph& g, std::span<const double> u, ProbeMode mode,
                                             std::span<const double> s_list) {
    check_size(g, u);
    const SpectralDecomposition dec = decompose(g);
    if (dec.zero_modes != 1) throw InputError("convergence probe needs a connected graph");
    const auto mu = g.measures();
    const std::vector<double> mean = mean_projection(g, u);
    const std::vector<double> lap = laplacian_apply(g, u);
    std::vector<double> logu;
    if (mode == ProbeMode::diff_quotient) logu = log_laplacian_spectral(dec, u);
    std::vector<double> out;
    for (double s : s_list) {
        const std::vector<double> frac = frac_laplacian_spectral(dec, s, u);
        std::vector<double> diff(u.size());
        for (std::size_t x = 0; x < u.size(); ++x) {
            switch (mode) {
                case ProbeMode::s_to_0: diff[x] = frac[x] - u[x] + mean[x]; break;
                case ProbeMode::s_to_1: diff[x] = frac[x] + lap[x]; break;
                case ProbeMode::diff_quotient: diff[x] = (frac[x] - u[x] + mean[x]) / s - logu[x]; break;
            }
        }
        out.push_back(norm_l2(mu, diff));
    }
    return out;
}

}  // namespace fraclog
