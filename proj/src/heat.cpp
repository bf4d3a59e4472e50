#include "fraclog/heat.hpp"

#include "fraclog/errors.hpp"
#include "fraclog/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace fraclog {

std::string_view to_string(HeatMethod method) {
    switch (method) {
        case HeatMethod::bessel_closed_form: return "bessel_closed_form";
        case HeatMethod::fourier_quadrature: return "fourier_quadrature";
        case HeatMethod::window_spectral: return "window_spectral";
    }
    return "";
}

namespace {

void check_offset(int d, const LatticePoint& k) {
    if (d < 1) throw InputError("dimension must be positive");
    if (k.dim() != d) throw InputError("offset " + k.to_string() + " does not have dimension " + std::to_string(d));
}

}  // namespace

HeatKernelEval heat_kernel_zd(int d, double t, const LatticePoint& k) {
    check_offset(d, k);
    if (!(t >= 0.0)) throw InputError("heat kernel: t must be nonnegative");
    double value = 1.0;
    for (int j = 0; j < d; ++j) value *= bessel_i_scaled(k[j], 2.0 * t);
    return {value, HeatMethod::bessel_closed_form, 4e-13 * d * value};
}

double heat_kernel_zd_derivative(int d, double t, const LatticePoint& k, int order) {
    check_offset(d, k);
    if (order < 0) throw InputError("derivative order must be nonnegative");
    if (order == 0) return heat_kernel_zd(d, t, k).value;
    double total = -2.0 * d * heat_kernel_zd_derivative(d, t, k, order - 1);
    std::vector<int> c(k.coords().begin(), k.coords().end());
    for (int j = 0; j < d; ++j) {
        for (int step : {-1, 1}) {
            c[static_cast<std::size_t>(j)] += step;
            total += heat_kernel_zd_derivative(d, t, LatticePoint(c), order - 1);
            c[static_cast<std::size_t>(j)] -= step;
        }
    }
    return total;
}

HeatKernelEval heat_kernel_fourier(int d, double t, const LatticePoint& k, const TorusQuadratureSpec& q) {
    check_offset(d, k);
    if (!(t >= 0.0)) throw InputError("heat kernel: t must be nonnegative");
    const int n = q.points_per_dim > 0 ? q.points_per_dim : default_points_per_dim(d);
    const KernelValue v = torus_grid_integral(d, k, n, [t](double phi, double) { return std::exp(-t * phi); });
    return {v.value, HeatMethod::fourier_quadrature, v.error_estimate};
}

std::vector<double> heat_series_coefficients(int d, const LatticePoint& k, int terms) {
    check_offset(d, k);
    if (terms < 1) throw InputError("need at least one series term");
    std::vector<double> out(static_cast<std::size_t>(terms), 0.0);
    out[0] = 1.0;
    for (int j = 0; j < d; ++j) {
        const int n = std::abs(k[j]);
        // I_n(2t) t^{-n} = sum_m t^{2m} / (m! (m+n)!)
        std::vector<double> factor(static_cast<std::size_t>(terms), 0.0);
        for (int m = 0; 2 * m < terms; ++m) {
            factor[static_cast<std::size_t>(2 * m)] = std::exp(-std::lgamma(m + 1.0) - std::lgamma(m + n + 1.0));
        }
        std::vector<double> next(static_cast<std::size_t>(terms), 0.0);
        for (int a = 0; a < terms; ++a) {
            if (out[static_cast<std::size_t>(a)] == 0.0) continue;
            for (int b = 0; a + b < terms; b += 2) {
                next[static_cast<std::size_t>(a + b)] += out[static_cast<std::size_t>(a)] * factor[static_cast<std::size_t>(b)];
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<double> heat_large_time_coefficients(int d, const LatticePoint& k, int terms) {
    check_offset(d, k);
    std::vector<double> out(static_cast<std::size_t>(terms), 0.0);
    out[0] = 1.0;
    for (int j = 0; j < d; ++j) {
        const double mu4 = 4.0 * static_cast<double>(k[j]) * k[j];
        // e^{-2t} I_nu(2t) sqrt(4 pi t) ~ sum_m (-1)^m a_m(nu) (2t)^{-m}
        std::vector<double> factor(static_cast<std::size_t>(terms), 0.0);
        double a = 1.0;
        for (int m = 0; m < terms; ++m) {
            factor[static_cast<std::size_t>(m)] = ((m % 2) ? -a : a) / std::pow(2.0, m);
            a *= (mu4 - (2.0 * m + 1.0) * (2.0 * m + 1.0)) / ((m + 1.0) * 8.0);
        }
        std::vector<double> next(static_cast<std::size_t>(terms), 0.0);
        for (int x = 0; x < terms; ++x) {
            for (int y = 0; x + y < terms; ++y) {
                next[static_cast<std::size_t>(x + y)] += out[static_cast<std::size_t>(x)] * factor[static_cast<std::size_t>(y)];
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

Vertex box_index(int d, int radius, const LatticePoint& x) {
    if (x.dim() != d || x.linf() > radius) throw InputError("point " + x.to_string() + " outside the window");
    const int side = 2 * radius + 1;
    Vertex v = 0;
    for (int j = 0; j < d; ++j) v = v * static_cast<Vertex>(side) + static_cast<Vertex>(x[j] + radius);
    return v;
}

WeightedGraph box_graph(int d, int radius, const std::function<double(const LatticePoint&)>& measure) {
    if (d < 1 || d > 3) throw InputError("window lattices support d = 1, 2, 3");
    if (radius < 1) throw InputError("window radius must be at least 1");
    const std::vector<LatticePoint> points = linf_box(d, radius);
    std::vector<Edge> edges;
    std::vector<double> mu;
    for (std::size_t v = 0; v < points.size(); ++v) {
        const LatticePoint& x = points[v];
        if (measure) {
            const double m = measure(x);
            if (!(m > 0.0)) throw InputError("window measure must be positive at " + x.to_string());
            mu.push_back(m);
        }
        for (int j = 0; j < d; ++j) {
            if (x[j] < radius) {
                std::vector<int> c(x.coords().begin(), x.coords().end());
                ++c[static_cast<std::size_t>(j)];
                edges.push_back({v, box_index(d, radius, LatticePoint(c)), 1.0});
            }
        }
    }
    return WeightedGraph::build(points.size(), edges, measure ? LaplacianKind::custom : LaplacianKind::standard, mu);
}

}  // namespace

WindowLattice::WindowLattice(int d, int radius, const std::function<double(const LatticePoint&)>& measure)
    : d_(d), radius_(radius), graph_(box_graph(d, radius, measure)) {}

Vertex WindowLattice::index(const LatticePoint& x) const { return box_index(d_, radius_, x); }

LatticePoint WindowLattice::point(Vertex v) const {
    const int side = 2 * radius_ + 1;
    std::vector<int> c(static_cast<std::size_t>(d_));
    for (int j = d_ - 1; j >= 0; --j) {
        c[static_cast<std::size_t>(j)] = static_cast<int>(v % static_cast<Vertex>(side)) - radius_;
        v /= static_cast<Vertex>(side);
    }
    return LatticePoint(std::move(c));
}

int window_radius_for(int d, double t, const LatticePoint& x, const LatticePoint& y) {
    const double margin = std::max(4.0 * std::sqrt(2.0 * d * t), 2.0 * d * t);
    return std::max(x.linf(), y.linf()) + static_cast<int>(std::ceil(margin)) + 1;
}

WindowHeatKernel::WindowHeatKernel(WindowLattice window) : window_(std::move(window)), dec_(decompose(window_.graph())) {}

HeatKernelEval WindowHeatKernel::operator()(double t, const LatticePoint& x, const LatticePoint& y) const {
    if (!(t >= 0.0)) throw InputError("heat kernel: t must be nonnegative");
    const Vertex vx = window_.index(x);
    const Vertex vy = window_.index(y);
    std::vector<double> indicator(window_.graph().size(), 0.0);
    indicator[vy] = 1.0;
    const auto heat = heat_apply(dec_, t, indicator);
    const double value = heat[vx] / window_.graph().measure(vy);
    return {value, HeatMethod::window_spectral, 1e-13 + dec_.max_residual};
}

HeatKernelEval heat_kernel_window(const WindowLattice& window, double t, const LatticePoint& x, const LatticePoint& y) {
    return WindowHeatKernel(window)(t, x, y);
}

double heat_derivative_at_zero(int d, const LatticePoint& k) {
    check_offset(d, k);
    const double p0 = k.is_origin() ? 1.0 : 0.0;
    constexpr int levels = 6;
    double h = 0.02;
    std::array<double, levels> table{};
    for (int i = 0; i < levels; ++i, h *= 0.5) table[static_cast<std::size_t>(i)] = (heat_kernel_zd(d, h, k).value - p0) / h;
    // Halving h: the error expansion is in powers of h.
    for (int order = 1; order < levels; ++order) {
        const double factor = std::pow(2.0, order);
        for (int i = levels - 1; i >= order; --i) {
            auto& fine = table[static_cast<std::size_t>(i)];
            fine = (factor * fine - table[static_cast<std::size_t>(i - 1)]) / (factor - 1.0);
        }
    }
    return table[levels - 1];
}

bool DerivativeReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

namespace {

std::string format_t(double t) {
    std::ostringstream os;
    os << "t=" << t;
    return os.str();
}

}  // namespace

DerivativeReport derivative_identity_checks(int d, std::span<const std::pair<LatticePoint, LatticePoint>> pairs,
                                            std::span<const double> t_grid) {
    DerivativeReport report;
    report.d = d;
    const LatticePoint origin = LatticePoint::origin(d);

    for (const auto& [x, y] : pairs) {
        check_offset(d, x);
        check_offset(d, y);
        if (x == y) throw InputError("derivative identity needs distinct vertices");
        const LatticePoint k = y - x;
        const double target = k.l1() == 1 ? 1.0 : 0.0;
        const double measured = heat_derivative_at_zero(d, k);
        IdentityCheck c{"first_derivative_at_zero", x.to_string() + "->" + y.to_string(), measured, target, 0.0, false};
        c.margin = 1e-6 - std::abs(measured - target);
        c.pass = c.margin >= 0.0;
        report.checks.push_back(c);
    }

    for (double t : t_grid) {
        for (int order = 1; order <= 2; ++order) {
            // Normalized lattice: mu = 2d, p_norm(t) = p(t/2d)/(2d).
            const double scale = std::pow(2.0 * d, -order - 1);
            const double normalized = std::abs(heat_kernel_zd_derivative(d, t / (2.0 * d), origin, order)) * scale;
            const double bound_norm = std::pow(2.0, order) / (2.0 * d);
            report.checks.push_back({"derivative_bound_normalized_order" + std::to_string(order), format_t(t), normalized,
                                     bound_norm, bound_norm - normalized, normalized <= bound_norm * (1 + 1e-12)});
            const double standard = std::abs(heat_kernel_zd_derivative(d, t, origin, order));
            const double bound_std = std::pow(4.0 * d, order);
            report.checks.push_back({"derivative_bound_standard_order" + std::to_string(order), format_t(t), standard,
                                     bound_std, bound_std - standard, standard <= bound_std * (1 + 1e-12)});
        }

        // Row sum of the time derivative over |y|_1 <= K; the omitted shells
        // are factorially small for t <= 10.
        const int radius = d == 1 ? 40 : (d == 2 ? 30 : 20);
        double row = 0.0;
        for (const LatticePoint& y : l1_ball(d, radius)) row += heat_kernel_zd_derivative(d, t, y, 1);
        report.checks.push_back({"row_sum_of_time_derivative", format_t(t), row, 0.0, 1e-10 - std::abs(row),
                                 std::abs(row) <= 1e-10});

        if (t > 0.0 && t <= 1.0) {
            constexpr double s = 0.5;
            double off = 0.0;
            for (const LatticePoint& y : l1_ball(d, radius)) {
                if (!y.is_origin()) off += heat_kernel_zd(d, t, y).value;
            }
            const double value = off * std::pow(t, -1.0 - s);
            // C_x = max over [0,1] of |p'(tau,0,0)|, attained at tau = 0 where it equals 2d.
            double cx = 0.0;
            for (int i = 0; i <= 200; ++i) cx = std::max(cx, std::abs(heat_kernel_zd_derivative(d, i / 200.0, origin, 1)));
            const double bound = cx * std::pow(t, -s);
            report.checks.push_back({"small_time_tail_bound", format_t(t), value, bound, bound - value, value <= bound});
        }
    }
    return report;
}

GaussianFitReport gaussian_bound_fit(int d, std::span<const double> t_list, int k_max) {
    if (d < 1 || d > 3) throw InputError("gaussian_bound_fit supports d = 1, 2, 3");
    if (t_list.empty() || k_max < 0) throw InputError("gaussian_bound_fit needs times and k_max >= 0");
    GaussianFitReport r;
    r.d = d;
    r.lower_constant = std::numeric_limits<double>::infinity();
    std::vector<double> xs, ys;
    for (double t : t_list) {
        if (!(t > 0.0)) throw InputError("gaussian_bound_fit: times must be positive");
        const double volume = static_cast<double>(lattice_ball_count(d, static_cast<int>(std::floor(std::sqrt(t)))));
        for (int k = 0; k <= k_max; ++k) {
            std::vector<int> c(static_cast<std::size_t>(d), 0);
            c[0] = k;
            const double p = heat_kernel_zd(d, t, LatticePoint(c)).value;
            r.upper_constant = std::max(r.upper_constant, p * volume);
            if (k == 0) r.diagonal_constant = std::max(r.diagonal_constant, p * volume);
            if (t <= 1.0 && k > 0) r.factorial_constant = std::max(r.factorial_constant, p * std::tgamma(k + 1.0));
            if (k > 0 && k <= t && p > 0.0) {
                xs.push_back(static_cast<double>(k) * k / t);
                ys.push_back(std::log(p * volume));
            }
            ++r.samples;
        }
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        r.lower_rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        r.lower_constant = std::min(r.lower_constant, std::exp(ys[i] + r.lower_rate * xs[i]));
    }
    if (xs.empty()) r.lower_constant = 0.0;
    r.finite = std::isfinite(r.upper_constant) && std::isfinite(r.lower_constant) && std::isfinite(r.lower_rate) &&
               std::isfinite(r.factorial_constant);
    return r;
}

void write_heat_csv(std::ostream& out, int d, std::span<const HeatSweepRow> rows) {
    out << "d,t";
    for (int j = 1; j <= d; ++j) out << ",k" << j;
    out << ",value,method,err_est\n";
    const auto old_precision = out.precision(17);
    for (const auto& row : rows) {
        out << d << ',' << row.t;
        for (int j = 0; j < d; ++j) out << ',' << row.k[j];
        out << ',' << row.eval.value << ',' << to_string(row.eval.method) << ',' << row.eval.error_estimate << '\n';
    }
    out.precision(old_precision);
}

}  // namespace fraclog
