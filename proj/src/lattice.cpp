#include "fraclog/lattice.hpp"

#include "fraclog/errors.hpp"
#include "fraclog/graph.hpp"
#include "fraclog/heat.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

namespace fraclog {

namespace {

constexpr int series_terms = 64;
constexpr int expansion_terms = 40;

void check_offset(int d, const LatticePoint& k) {
    if (d < 1 || d > 3) throw InputError("lattice kernels support d = 1, 2, 3");
    if (k.dim() != d) throw InputError("offset " + k.to_string() + " has the wrong dimension");
}

void check_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw InputError("fractional order must lie in (0, 1)");
}

// int_0^1 t^{a-1} e^{-c t} dt = e^{-c} sum_j c^j / (a (a+1) ... (a+j)), a > 0.
long double lower_incomplete(long double a, long double c) {
    long double term = 1.0L / a;
    long double sum = term;
    for (int j = 1; j < 400; ++j) {
        term *= c / (a + j);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return std::exp(-c) * sum;
}

// int_0^1 (1 - e^{-c t}) t^{-1-q} dt for q < 1.
long double one_minus_exp_moment(long double c, long double q) {
    long double sum = 0.0L;
    long double power = 1.0L;  // c^j / j!
    for (int j = 1; j < 200; ++j) {
        power *= c / j;
        const long double term = power / (j - q);
        sum += (j % 2) ? term : -term;
        if (power < 1e-24L) break;
    }
    return sum;
}

// Fourier-side continuum constant: int_0^inf (4 pi t)^{-d/2} e^{-r^2/4t} t^{-1-q} dt = a_q r^{-d-2q}.
double continuum_constant(int d, double q) {
    return std::pow(pi, -0.5 * d) * std::pow(4.0, q) * gamma_fn(0.5 * d + q);
}

double sphere_area(int d) {
    return 2.0 * std::pow(pi, 0.5 * d) / gamma_fn(0.5 * d);
}

}  // namespace

KernelEntry heat_moment_small(int d, const LatticePoint& k, double q) {
    check_offset(d, k);
    if (!(q < 1.0)) throw InputError("small-time moment needs q < 1");
    const long double c = 2.0L * d;
    const std::vector<double> coeff = heat_series_coefficients(d, k, series_terms);
    const int base = k.l1();
    long double sum = 0.0L;
    long double magnitude = 0.0L;
    for (int i = (k.is_origin() ? 1 : 0); i < series_terms; ++i) {
        if (coeff[static_cast<std::size_t>(i)] == 0.0) continue;
        const long double term = coeff[static_cast<std::size_t>(i)] * lower_incomplete(base + i - static_cast<long double>(q), c);
        sum += term;
        magnitude += std::fabs(term);
    }
    if (k.is_origin()) {
        const long double head = one_minus_exp_moment(c, q);
        sum = head - sum;
        magnitude += std::fabs(head);
    }
    const double value = static_cast<double>(sum);
    return {value, 1e-16 * static_cast<double>(magnitude) + std::numeric_limits<double>::denorm_min()};
}

KernelEntry heat_moment_large(int d, const LatticePoint& k, double q, double tol) {
    check_offset(d, k);
    if (!(q > -0.5 * d)) throw InputError("large-time moment needs q > -d/2");
    if (!(tol > 0.0)) throw InputError("tolerance must be positive");
    double widest = 0.0;
    for (int j = 0; j < d; ++j) widest = std::max(widest, std::fabs(static_cast<double>(k[j])));
    // Beyond T the expansion ratio nu^2/(4t) stays below 1/16.
    const double horizon = 30.0 + 4.0 * widest * widest;
    const double tau_end = std::log(horizon);
    std::vector<double> breaks;
    for (double tau = 0.0; tau < tau_end; tau += 0.5) breaks.push_back(tau);
    breaks.push_back(tau_end);
    const auto integrand = [&](double tau) {
        const double t = std::exp(tau);
        return heat_kernel_zd(d, t, k).value * std::exp(-q * tau);
    };
    const QuadratureResult body = integrate(integrand, breaks, {0.5 * tol, 1e-14, 2000000});

    const std::vector<double> b = heat_large_time_coefficients(d, k, expansion_terms);
    const double scale = std::pow(4.0 * pi, -0.5 * d);
    double tail = 0.0;
    double last = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int m = 0; m < expansion_terms; ++m) {
        const double e = 0.5 * d + m + q;
        const double term = scale * b[static_cast<std::size_t>(m)] * std::pow(horizon, -e) / e;
        if (std::fabs(term) > previous) break;  // asymptotic series turned
        tail += term;
        last = std::fabs(term);
        previous = last;
        if (last < 1e-19) break;
    }
    const double error = body.abs_error_estimate + last;
    if (error > tol) throw BudgetError("large-time moment misses tolerance at k = " + k.to_string());
    return {body.value + tail, error};
}

KernelEntry w_s(int d, double s, const LatticePoint& k, double tol) {
    check_s(s);
    if (k.is_origin()) throw InputError("W_s is defined off the diagonal");
    const double factor = s * rgamma(1.0 - s);
    const KernelEntry small = heat_moment_small(d, k, s);
    const KernelEntry large = heat_moment_large(d, k, s, tol / std::max(factor, 1.0));
    return {factor * (small.value + large.value), factor * (small.error_estimate + large.error_estimate)};
}

KernelEntry w_log(int d, const LatticePoint& k, double) {
    if (k.is_origin()) throw InputError("W_log is defined off the diagonal");
    return heat_moment_small(d, k, 0.0);
}

KernelEntry w_long(int d, const LatticePoint& k, double tol) {
    return heat_moment_large(d, k, 0.0, tol);
}

double wlog_tail_bound(int d, int radius) {
    if (d < 1 || d > 3) throw InputError("lattice kernels support d = 1, 2, 3");
    if (radius < 0) throw InputError("radius must be nonnegative");
    const double c = 2.0 * d;
    double bound = 0.0;
    for (int r = radius + 1;; ++r) {
        const double log_term = std::log(static_cast<double>(shell_count(d, r))) + r * std::log(c) - std::log(r) -
                                std::lgamma(r + 1.0);
        const double term = std::exp(log_term);
        bound += term;
        if (r > 2 * c && term < 1e-3 * bound) break;
        if (term == 0.0 && r > 2 * c) break;
    }
    return bound;
}

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::w_s: return "w_s";
        case KernelKind::w_log: return "w_log";
        case KernelKind::w_long: return "w_long";
    }
    return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "w_s") return KernelKind::w_s;
    if (name == "w_log") return KernelKind::w_log;
    if (name == "w_long" || name == "w") return KernelKind::w_long;
    throw InputError("unknown kernel kind '" + std::string(name) + "' (w_s, w_log, w_long)");
}

KernelCache::KernelCache(int d, double tol) : d_(d), tol_(tol) {
    if (d < 1 || d > 3) throw InputError("lattice kernels support d = 1, 2, 3");
    if (!(tol > 0.0)) throw InputError("tolerance must be positive");
}

KernelEntry KernelCache::get(KernelKind kind, double s, const LatticePoint& k) {
    check_offset(d_, k);
    if (kind != KernelKind::w_s) s = 0.0;
    auto key = std::make_tuple(static_cast<int>(kind), s, k.canonical());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    KernelEntry entry;
    switch (kind) {
        case KernelKind::w_s: entry = fraclog::w_s(d_, s, std::get<2>(key), tol_); break;
        case KernelKind::w_log: entry = fraclog::w_log(d_, std::get<2>(key), tol_); break;
        case KernelKind::w_long: entry = fraclog::w_long(d_, std::get<2>(key), tol_); break;
    }
    cache_.emplace(std::move(key), entry);
    return entry;
}

KernelEntry KernelCache::w_s(double s, const LatticePoint& k) { return get(KernelKind::w_s, s, k); }
KernelEntry KernelCache::w_log(const LatticePoint& k) { return get(KernelKind::w_log, 0.0, k); }
KernelEntry KernelCache::w_long(const LatticePoint& k) { return get(KernelKind::w_long, 0.0, k); }

KernelEntry KernelCache::frac_row_sum(double s) {
    check_s(s);
    if (auto it = frac_rows_.find(s); it != frac_rows_.end()) return it->second;
    const LatticePoint origin = LatticePoint::origin(d_);
    const double factor = s * rgamma(1.0 - s);
    const KernelEntry small = heat_moment_small(d_, origin, s);
    const KernelEntry large = heat_moment_large(d_, origin, s, tol_ / std::max(factor, 1.0));
    // int_1^inf t^{-1-s} dt = 1/s
    const KernelEntry row{factor * (small.value - large.value) + rgamma(1.0 - s),
                          factor * (small.error_estimate + large.error_estimate)};
    frac_rows_.emplace(s, row);
    return row;
}

int KernelCache::log_row_radius() const {
    int radius = 1;
    while (wlog_tail_bound(d_, radius) > 1e-3 * tol_) ++radius;
    return radius;
}

KernelEntry KernelCache::log_row_sum() {
    if (have_log_row_) return log_row_;
    const int radius = log_row_radius();
    double sum = 0.0;
    double error = 0.0;
    for (const LatticePoint& k : l1_ball(d_, radius)) {
        if (k.is_origin()) continue;
        const KernelEntry e = w_log(k);
        sum += e.value;
        error += e.error_estimate;
    }
    log_row_ = {sum, error + wlog_tail_bound(d_, radius)};
    have_log_row_ = true;
    return log_row_;
}

KernelTable build_kernel_table(KernelCache& cache, KernelKind kind, double s, int radius) {
    if (radius < 0) throw InputError("table radius must be nonnegative");
    if (kind == KernelKind::w_s) check_s(s);
    KernelTable table;
    table.kind = kind;
    table.d = cache.dim();
    table.s = kind == KernelKind::w_s ? s : 0.0;
    table.radius = radius;
    for (const LatticePoint& k : l1_ball(cache.dim(), radius)) {
        if (k.is_origin() && kind != KernelKind::w_long) continue;
        table.entries.emplace_back(k, cache.get(kind, s, k));
    }
    return table;
}

void write_kernel_csv(std::ostream& out, const KernelTable& table) {
    out << "kind,d,s";
    for (int j = 1; j <= table.d; ++j) out << ",k" << j;
    out << ",value,err_est\n";
    const auto old_precision = out.precision(17);
    for (const auto& [k, entry] : table.entries) {
        out << to_string(table.kind) << ',' << table.d << ',' << table.s;
        for (int j = 0; j < table.d; ++j) out << ',' << k[j];
        out << ',' << entry.value << ',' << entry.error_estimate << '\n';
    }
    out.precision(old_precision);
}

RowSumIdentity wlog_row_sum_identity(int d, double tol, int radius) {
    KernelCache cache(d, 1e-3 * tol);
    RowSumIdentity out;
    out.d = d;
    out.tol = tol;
    out.radius = radius > 0 ? radius : cache.log_row_radius();
    for (const LatticePoint& k : l1_ball(d, out.radius)) {
        if (!k.is_origin()) out.lhs += cache.w_log(k).value;
    }
    out.tail_bound = wlog_tail_bound(d, out.radius);
    // Right side by quadrature in tau = ln t, independent of the series used for W_log.
    const LatticePoint origin = LatticePoint::origin(d);
    const auto integrand = [&](double tau) {
        const double t = std::exp(tau);
        return 1.0 - heat_kernel_zd(d, t, origin).value;
    };
    const std::vector<double> breaks = {-60.0, -40.0, -20.0, -10.0, -5.0, -2.0, -1.0, 0.0};
    out.rhs = integrate(integrand, breaks, {1e-3 * tol, 1e-14}).value + 2.0 * d * std::exp(-60.0);
    out.gap = std::fabs(out.lhs - out.rhs);
    out.pass = out.gap <= tol;
    return out;
}

double frac_laplacian_pointwise(KernelCache& cache, double s, const LatticeFunction& u, const LatticePoint& x) {
    if (u.dim() != cache.dim() || x.dim() != cache.dim()) throw InputError("dimension mismatch");
    double value = u(x) * cache.frac_row_sum(s).value;
    const auto support = u.support();
    const auto values = u.values();
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == x) continue;
        value -= cache.w_s(s, x - support[i]).value * values[i];
    }
    return value;
}

double log_laplacian_pointwise(KernelCache& cache, const LatticeFunction& u, const LatticePoint& x) {
    if (u.dim() != cache.dim() || x.dim() != cache.dim()) throw InputError("dimension mismatch");
    const double ux = u(x);
    double value = ux == 0.0 ? 0.0 : ux * (cache.log_row_sum().value - euler_gamma);
    const auto support = u.support();
    const auto values = u.values();
    for (std::size_t i = 0; i < support.size(); ++i) {
        const LatticePoint k = x - support[i];
        if (!k.is_origin()) value -= cache.w_log(k).value * values[i];
        value -= cache.w_long(k).value * values[i];
    }
    return value;
}

RowBound log_gradient_row_bound(KernelCache& cache, int radius) {
    if (radius < 1) throw InputError("row radius must be positive");
    RowBound out;
    out.radius = radius;
    for (const LatticePoint& k : l1_ball(cache.dim(), 2 * radius)) {
        if (k.is_origin()) continue;
        const double w = cache.w_log(k).value;
        if (k.l1() <= radius) out.value += w;
        out.doubled += w;
    }
    out.tail_bound = wlog_tail_bound(cache.dim(), radius);
    out.gap = std::fabs(out.doubled - out.value);
    return out;
}

GrowthReport quadratic_form_growth(KernelCache& cache, std::span<const int> n_list) {
    const int d = cache.dim();
    GrowthReport out;
    for (int n : n_list) {
        if (n < 1 || n > 30) throw InputError("ball radius must lie in [1, 30]");
        double q = 0.0;
        if (d == 1) {
            // Toeplitz sum: offset j occurs 2n+1-|j| times.
            const double volume = 2.0 * n + 1.0;
            for (int j = -2 * n; j <= 2 * n; ++j) {
                q += (volume - std::abs(j)) * cache.w_long(LatticePoint{j}).value;
            }
            q /= volume;
        } else {
            const std::vector<LatticePoint> ball = l1_ball(d, n);
            std::map<LatticePoint, double> multiplicity;
            for (const auto& x : ball) {
                for (const auto& y : ball) multiplicity[(x - y).canonical()] += 1.0;
            }
            for (const auto& [k, count] : multiplicity) q += count * cache.w_long(k).value;
            q /= static_cast<double>(ball.size());
        }
        out.n.push_back(n);
        out.q.push_back(q);
    }
    out.increasing = out.q.size() >= 2;
    for (std::size_t i = 1; i < out.q.size(); ++i) out.increasing = out.increasing && out.q[i] > out.q[i - 1];
    const std::size_t m = out.q.size();
    if (m >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mx += std::log(out.n[i]);
            my += out.q[i];
        }
        mx /= m;
        my /= m;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double dx = std::log(out.n[i]) - mx;
            const double dy = out.q[i] - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
        out.intercept = my - out.slope * mx;
        out.r_squared = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 1.0;
    }
    return out;
}

LatticeProbe lattice_convergence_probe(KernelCache& cache, const LatticeFunction& u, ProbeMode mode,
                                       std::span<const double> s_list, double p, int window) {
    const int d = cache.dim();
    if (u.dim() != d) throw InputError("dimension mismatch");
    if (!(p >= 1.0)) throw InputError("norm exponent must be at least 1");
    if (window < 1) throw InputError("window must be positive");
    LatticeProbe out;
    out.mode = mode;
    out.p = p;
    out.window = window;
    const bool sup = std::isinf(p);

    std::set<LatticePoint> points;
    for (const auto& y : u.support()) {
        for (const auto& k : linf_box(d, window)) points.insert(y + k);
    }
    double mass = 0.0;
    for (double v : u.values()) mass += v;

    std::vector<double> log_values;
    if (mode == ProbeMode::diff_quotient) {
        for (const auto& x : points) log_values.push_back(log_laplacian_pointwise(cache, u, x));
    }

    for (double s : s_list) {
        check_s(s);
        double acc = 0.0;
        std::size_t idx = 0;
        for (const auto& x : points) {
            const double frac = frac_laplacian_pointwise(cache, s, u, x);
            double e = 0.0;
            switch (mode) {
                case ProbeMode::s_to_1: {
                    double lap = 0.0;
                    for (int j = 0; j < d; ++j) {
                        std::vector<int> c(x.coords().begin(), x.coords().end());
                        c[j] += 1;
                        lap += u(LatticePoint(c));
                        c[j] -= 2;
                        lap += u(LatticePoint(c));
                    }
                    lap -= 2.0 * d * u(x);
                    e = frac + lap;
                    break;
                }
                case ProbeMode::s_to_0: e = frac - u(x); break;
                case ProbeMode::diff_quotient: e = (frac - u(x)) / s - log_values[idx]; break;
            }
            acc = sup ? std::max(acc, std::fabs(e)) : acc + std::pow(std::fabs(e), p);
            ++idx;
        }
        const double window_part = sup ? acc : std::pow(acc, 1.0 / p);

        // Off the window the error is -sum_y k(x - y) u(y) with k given by the
        // continuum kernel asymptotics; centre the mass at the support.
        const double as = continuum_constant(d, s) * rgamma(1.0 - s);
        const double a0 = continuum_constant(d, 0.0);
        const auto profile = [&](double r) {
            const double ws = as * s * std::pow(r, -d - 2.0 * s);
            switch (mode) {
                case ProbeMode::s_to_1:
                case ProbeMode::s_to_0: return -mass * ws;
                case ProbeMode::diff_quotient: break;
            }
            return -mass * (ws / s - a0 * std::pow(r, -d));
        };
        const double r0 = window + 1.0;
        double tail = 0.0;
        if (sup) {
            for (double tau = 0.0; tau <= 60.0; tau += 0.01) tail = std::max(tail, std::fabs(profile(r0 * std::exp(tau))));
        } else {
            const auto integrand = [&](double tau) {
                const double r = std::exp(tau);
                return sphere_area(d) * std::pow(r, d) * std::pow(std::fabs(profile(r)), p);
            };
            const double lo = std::log(r0 - 0.5);
            std::vector<double> breaks;
            for (double tau = lo; tau < lo + 200.0; tau += 2.0) breaks.push_back(tau);
            tail = std::pow(integrate(integrand, breaks, {1e-30, 1e-10}).value, 1.0 / p);
        }
        out.s.push_back(s);
        out.window_part.push_back(window_part);
        out.tail_part.push_back(tail);
        out.error.push_back(sup ? std::max(window_part, tail)
                                : std::pow(std::pow(window_part, p) + std::pow(tail, p), 1.0 / p));
    }
    out.decreasing = out.error.size() >= 2;
    for (std::size_t i = 1; i < out.error.size(); ++i) out.decreasing = out.decreasing && out.error[i] < out.error[i - 1];
    return out;
}

LatticeProbe diff_quotient_error(KernelCache& cache, const LatticeFunction& u, std::span<const double> s_list, double p,
                                 int window) {
    return lattice_convergence_probe(cache, u, ProbeMode::diff_quotient, s_list, p, window);
}

}  // namespace fraclog
