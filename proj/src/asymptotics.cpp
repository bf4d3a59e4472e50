#include "fraclog/asymptotics.hpp"

#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fraclog {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        carry_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / gamma_fn(0.5 * d); }

void check_order(double s, int d) {
    if (d < 1 || d > 3) throw InputError("oscillatory limits support d = 1, 2, 3");
    if (!(s > -0.5 * d && s < 1.0)) throw InputError("order must lie in (-d/2, 1)");
    if (s == 0.0) throw InputError("order 0 is the delta normalization and is excluded");
}

// Integrate f over [0, n]: graded panels toward 0 where f ~ lead r^power, then
// panels of width pi, summed with compensation.
double oscillatory_integral(const Integrand& f, double lead, double power, double n) {
    constexpr double floor = 1e-14;
    CompensatedSum sum;
    sum.add(lead * std::pow(floor, power + 1.0) / (power + 1.0));
    std::vector<double> breaks = geometric_breaks(floor, 1.0, 4.0);
    for (double r = 1.0 + pi; r < n; r += pi) breaks.push_back(r);
    breaks.push_back(n);
    // Per-panel floor: roundoff of the integrand at the largest radius.
    const double noise = 1e-16 * std::fabs(lead) * std::pow(n, std::max(power, 0.0)) * pi;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const double scale = apply_kronrod21(f, a, b).abs_integral;
        sum.add(integrate(f, a, b, {std::max(1e-14 * scale, noise), 1e-14, 400000}).value);
    }
    return sum.value();
}

double beta_9_9() { return std::exp(2.0 * std::lgamma(9.0) - std::lgamma(18.0)); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double& intercept, double& r_squared) {
    const double m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    intercept = my - slope * mx;
    r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return slope;
}

AsymptoticFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) throw InputError("a fit needs at least two samples");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) throw BudgetError("nonpositive kernel value in a log-log fit");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    AsymptoticFit fit;
    double intercept = 0.0;
    fit.exponent = fit_slope(lx, ly, intercept, fit.r_squared);
    fit.window_lo = x.front();
    fit.window_hi = x.back();
    return fit;
}

LatticePoint axis_point(int d, int k) {
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    c[0] = k;
    return LatticePoint(c);
}

void check_k_list(std::span<const int> k_list) {
    if (k_list.size() < 2) throw InputError("need at least two offsets");
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        if (k_list[i] < 1) throw InputError("offsets must be positive");
        if (i > 0 && k_list[i] <= k_list[i - 1]) throw InputError("offsets must increase");
    }
}

// Richardson in 1/|k| over the two largest offsets.
double plateau(const std::vector<double>& k, const std::vector<double>& p, double power) {
    const std::size_t m = k.size();
    const double a = std::pow(k[m - 2], power) * p[m - 2];
    const double b = std::pow(k[m - 1], power) * p[m - 1];
    return (k[m - 1] * b - k[m - 2] * a) / (k[m - 1] - k[m - 2]);
}

}  // namespace

double c_sd(double s, int d) {
    if (!(s > 0.0 && s <= 1.0)) throw InputError("s must lie in (0, 1]");
    if (d < 1) throw InputError("dimension must be positive");
    return std::pow(pi, -0.5 * d) * gamma_fn(d / (2.0 * s)) / (s * std::pow(2.0, d) * gamma_fn(0.5 * d));
}

double cutoff_integral(double s, int d, CutoffFamily family, double n) {
    check_order(s, d);
    if (!(n >= 4.0)) throw InputError("cutoff scale must be at least 4");
    if (d == 1) {
        const auto f = [&](double r) { return 2.0 * std::pow(r, 2.0 * s) * cutoff(family, r / n) * std::cos(r); };
        return oscillatory_integral(f, 2.0, 2.0 * s, n);
    }
    const double nu = 0.5 * d - 1.0;
    const double front = std::pow(2.0 * pi, 0.5 * d);
    const auto f = [&](double r) { return front * std::pow(r, 2.0 * s + 0.5 * d) * cutoff(family, r / n) * bessel_j(nu, r); };
    const double lead = front / (std::pow(2.0, nu) * gamma_fn(nu + 1.0));
    return oscillatory_integral(f, lead, 2.0 * s + d - 1.0, n);
}

double cutoff_integral_polar(double s, CutoffFamily family, double n, double angle) {
    check_order(s, 2);
    if (!(n >= 4.0)) throw InputError("cutoff scale must be at least 4");
    const auto f = [&](double r) {
        const int m = static_cast<int>(std::ceil(r) + 30.0 * std::ceil(std::cbrt(r)) + 32.0);
        CompensatedSum ring;
        for (int j = 0; j < m; ++j) {
            const double phi = 2.0 * pi * j / m;
            ring.add(std::cos(r * std::cos(phi - angle)));
        }
        return std::pow(r, 2.0 * s + 1.0) * cutoff(family, r / n) * ring.value() * (2.0 * pi / m);
    };
    return oscillatory_integral(f, 2.0 * pi, 2.0 * s + 1.0, n);
}

double cutoff_integral_by_parts(double s, double n) {
    check_order(s, 1);
    const double a = 0.5 * pi;
    if (!(n > 4.0 * a)) throw InputError("cutoff scale too small for the split");
    const double b = beta_9_9();
    const auto chi1 = [&](double x) {
        if (x <= 0.5 || x >= 1.0) return 0.0;
        const double u = 2.0 * x - 1.0;
        return -2.0 * std::pow(u * (1.0 - u), 8) / b;
    };
    const auto chi2 = [&](double x) {
        if (x <= 0.5 || x >= 1.0) return 0.0;
        const double u = 2.0 * x - 1.0;
        return -32.0 * std::pow(u * (1.0 - u), 7) * (1.0 - 2.0 * u) / b;
    };
    const auto chi = [&](double x) { return cutoff(CutoffFamily::poly_smooth, x); };
    const double q = 2.0 * s;
    const auto second = [&](double r) {
        const double x = r / n;
        return q * (q - 1.0) * std::pow(r, q - 2.0) * chi(x) + 2.0 * q * std::pow(r, q - 1.0) * chi1(x) / n +
               std::pow(r, q) * chi2(x) / (n * n);
    };
    const auto head_f = [&](double r) { return std::pow(r, q) * std::cos(r); };
    const double head = oscillatory_integral(head_f, 1.0, q, a);
    const double fa = std::pow(a, q);
    const double dfa = q * std::pow(a, q - 1.0);
    CompensatedSum tail;
    std::vector<double> breaks;
    for (double r = a; r < n; r += pi) breaks.push_back(r);
    breaks.push_back(n);
    const auto g = [&](double r) { return second(r) * std::cos(r); };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double scale = std::max(apply_kronrod21(g, breaks[i], breaks[i + 1]).abs_integral, 1e-300);
        tail.add(integrate(g, breaks[i], breaks[i + 1], {std::max(1e-14 * scale, 1e-17), 1e-14, 400000}).value);
    }
    return 2.0 * (head - fa * std::sin(a) - dfa * std::cos(a) - tail.value());
}

CutoffLimit a_sd(double s, int d, const CutoffSpec& spec) {
    check_order(s, d);
    if (spec.n_list.size() < 2) throw InputError("need at least two cutoff scales");
    for (std::size_t i = 1; i < spec.n_list.size(); ++i) {
        if (!(spec.n_list[i] > spec.n_list[i - 1])) throw InputError("cutoff scales must increase");
    }
    CutoffLimit out;
    out.s = s;
    out.d = d;
    out.family = spec.family;
    for (double n : spec.n_list) {
        out.n.push_back(n);
        out.partial.push_back(cutoff_integral(s, d, spec.family, n));
    }
    const std::size_t m = out.n.size();
    const double n1 = out.n[m - 2], n2 = out.n[m - 1];
    const double a1 = out.partial[m - 2], a2 = out.partial[m - 1];
    out.value = a2;
    out.richardson = (n2 * a2 - n1 * a1) / (n2 - n1);
    out.stability = std::fabs(a2 - a1) / std::max(std::fabs(a2), 1e-300);
    bool shrinking = true;
    for (std::size_t i = 2; i < m; ++i) {
        shrinking = shrinking && std::fabs(out.partial[i] - out.partial[i - 1]) < std::fabs(out.partial[i - 1] - out.partial[i - 2]);
    }
    if (!shrinking || out.stability > 5e-3) {
        std::ostringstream msg;
        msg << "cutoff integral not converging across scales (s = " << s << ", d = " << d << ", last change " << out.stability << ")";
        throw BudgetError(msg.str());
    }
    return out;
}

CutoffReport a_sd_report(double s, int d, const std::vector<double>& n_list) {
    CutoffReport out;
    out.primary = a_sd(s, d, {CutoffFamily::poly_smooth, n_list});
    out.alternate = a_sd(s, d, {CutoffFamily::exp_bump, n_list});
    out.value = out.primary.value;
    const double scale = std::max(std::fabs(out.value), 1e-300);
    out.family_gap = std::fabs(out.primary.value - out.alternate.value) / scale;
    if (d == 2) {
        const double n = n_list.back();
        const double along_axis = cutoff_integral_polar(s, CutoffFamily::poly_smooth, n, 0.0);
        const double oblique = cutoff_integral_polar(s, CutoffFamily::poly_smooth, n, 1.0);
        out.direction_gap = std::fabs(along_axis - oblique) / scale;
    }
    out.pass = out.family_gap <= 1e-4 && out.direction_gap <= 1e-4;
    return out;
}

LawReport large_time_fit(int d, double s, std::span<const double> t_list, const TorusQuadratureSpec& q) {
    if (t_list.size() < 2) throw InputError("need at least two times");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0) || t_list[i] > 1e6) throw InputError("times must lie in (0, 1e6]");
        if (i > 0 && !(t_list[i] > t_list[i - 1])) throw InputError("times must increase");
    }
    LawReport out;
    out.law = "large_time";
    out.parameters = {{"d", d}, {"s", s}};
    const LatticePoint origin = LatticePoint::origin(d);
    for (double t : t_list) {
        out.x.push_back(t);
        out.y.push_back(ps_kernel(d, s, t, origin, q).value);
    }
    out.fit = log_log_fit(out.x, out.y);
    const double power = d / (2.0 * s);
    out.fit.constant = std::pow(out.x.back(), power) * out.y.back();
    out.reference_exponent = -power;
    out.reference_constant = c_sd(s, d);
    out.exponent_err = std::fabs(out.fit.exponent - out.reference_exponent);
    out.rel_err = std::fabs(out.fit.constant / out.reference_constant - 1.0);
    out.exponent_tol = 1e-2;
    out.constant_tol = 1e-2;
    out.pass = out.exponent_err <= out.exponent_tol && out.rel_err <= out.constant_tol;
    return out;
}

LawReport tail_fit_ps(int d, double s, double t, std::span<const int> k_list, const TorusQuadratureSpec& q) {
    if (!(s > 0.0 && s < 1.0)) throw InputError("s must lie in (0, 1)");
    if (!(t > 0.0)) throw InputError("time must be positive");
    check_k_list(k_list);
    LawReport out;
    out.law = "tail_ps";
    out.parameters = {{"d", d}, {"s", s}, {"t", t}};
    for (int k : k_list) {
        out.x.push_back(k);
        out.y.push_back(ps_kernel(d, s, t, axis_point(d, k), q).value);
    }
    out.fit = log_log_fit(out.x, out.y);
    const double power = d + 2.0 * s;
    out.fit.constant = plateau(out.x, out.y, power);
    out.reference_exponent = -power;
    out.reference_constant = -t * a_sd(s, d).value / std::pow(2.0 * pi, d);
    out.exponent_err = std::fabs(out.fit.exponent - out.reference_exponent);
    out.rel_err = std::fabs(out.fit.constant / out.reference_constant - 1.0);
    out.exponent_tol = 0.1;
    out.constant_tol = 0.05;
    out.pass = out.exponent_err <= out.exponent_tol && out.rel_err <= out.constant_tol;
    return out;
}

LawReport tail_fit_plog(int d, double t, std::span<const int> k_list, const TorusQuadratureSpec& q) {
    if (!(t > 0.0 && t < 0.5 * d)) throw LifespanError("log-diffusion tails need 0 < t < d/2");
    check_k_list(k_list);
    LawReport out;
    out.law = "tail_plog";
    out.parameters = {{"d", d}, {"t", t}};
    for (int k : k_list) {
        out.x.push_back(k);
        out.y.push_back(plog_kernel(d, t, axis_point(d, k), q).value);
    }
    out.fit = log_log_fit(out.x, out.y);
    const double power = d - 2.0 * t;
    out.fit.constant = plateau(out.x, out.y, power);
    out.reference_exponent = -power;
    out.reference_constant = a_sd(-t, d).value / std::pow(2.0 * pi, d);
    out.exponent_err = std::fabs(out.fit.exponent - out.reference_exponent);
    out.rel_err = std::fabs(out.fit.constant / out.reference_constant - 1.0);
    out.exponent_tol = 0.1;
    out.constant_tol = 0.05;
    out.pass = out.exponent_err <= out.exponent_tol && out.rel_err <= out.constant_tol;
    return out;
}

BlowupReport blowup_fit_plog(int d, const LatticePoint& k, std::span<const double> gap_list, const TorusQuadratureSpec& q) {
    if (k.dim() != d) throw InputError("offset has the wrong dimension");
    if (k.is_origin()) throw InputError("the blow-up law is off the diagonal");
    if (gap_list.size() < 2) throw InputError("need at least two gaps");
    BlowupReport out;
    out.d = d;
    out.k = k;
    out.gap.assign(gap_list.begin(), gap_list.end());
    std::sort(out.gap.begin(), out.gap.end(), std::greater<>());
    for (double g : out.gap) {
        if (!(g > 0.0 && g < d)) throw InputError("gaps must lie in (0, d)");
        out.product.push_back(g * plog_kernel(d, 0.5 * (d - g), k, q).value);
    }
    const std::size_t m = out.gap.size();
    const double g1 = out.gap[m - 2], g2 = out.gap[m - 1];
    const double p1 = out.product[m - 2], p2 = out.product[m - 1];
    out.limit = (g1 * p2 - g2 * p1) / (g1 - g2);
    out.increasing = true;
    for (std::size_t i = 1; i < m; ++i) out.increasing = out.increasing && out.product[i] > out.product[i - 1];
    out.sphere = sphere_area(d);
    out.sphere_normalized = out.sphere / std::pow(2.0 * pi, d);
    out.rel_err_sphere = std::fabs(out.limit / out.sphere - 1.0);
    out.rel_err_normalized = std::fabs(out.limit / out.sphere_normalized - 1.0);
    if (out.rel_err_normalized <= 1e-2) {
        out.matches = "sphere_normalized";
    } else if (out.rel_err_sphere <= 1e-2) {
        out.matches = "sphere";
    } else {
        out.matches = "neither";
    }
    out.discrepancy = out.matches != "sphere";
    std::ostringstream note;
    note << "lim (d-2t) p_log = " << out.limit << "; |S^{d-1}| = " << out.sphere
         << ", |S^{d-1}|/(2 pi)^d = " << out.sphere_normalized << "; matches " << out.matches;
    out.note = note.str();
    return out;
}

}  // namespace fraclog
