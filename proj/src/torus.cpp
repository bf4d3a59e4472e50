#include "fraclog/torus.hpp"

#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace fraclog {

double cutoff(CutoffFamily family, double x) {
    x = std::abs(x);
    if (x <= 0.5) return 1.0;
    if (x >= 1.0) return 0.0;
    const double u = 2.0 * x - 1.0;
    switch (family) {
        case CutoffFamily::poly_smooth: {
            // Regularized incomplete beta I_{1-u}(9, 9): derivatives up to order 8 vanish at
            // both ends. Positive terms only, so the edge x -> 1 keeps full relative accuracy.
            double sum = 0.0, binom = 1.0, power = 1.0;
            for (int k = 0; k <= 8; ++k) {
                sum += binom * power;
                binom = binom * (8 + k + 1) / (k + 1);
                power *= u;
            }
            return std::pow(1.0 - u, 9) * sum;
        }
        case CutoffFamily::exp_bump: {
            const double a = std::exp(-1.0 / (1.0 - u));
            const double b = std::exp(-1.0 / u);
            return a / (a + b);
        }
    }
    return 0.0;
}

std::string_view to_string(CutoffFamily family) {
    return family == CutoffFamily::poly_smooth ? "poly_smooth" : "exp_bump";
}

CutoffFamily parse_cutoff(std::string_view name) {
    if (name == "poly_smooth") return CutoffFamily::poly_smooth;
    if (name == "exp_bump") return CutoffFamily::exp_bump;
    throw InputError("unknown cutoff family '" + std::string(name) + "'");
}

int default_points_per_dim(int d) {
    switch (d) {
        case 1: return 16384;
        case 2: return 512;
        case 3: return 128;
        default: throw InputError("torus quadrature supports d = 1, 2, 3");
    }
}

double symbol_phi(std::span<const double> xi) {
    double total = 0.0;
    for (double x : xi) {
        const double half = std::sin(0.5 * x);
        total += 4.0 * half * half;
    }
    return total;
}

namespace {

void check_dim(int d) {
    if (d < 1 || d > 3) throw InputError("torus quadrature supports d = 1, 2, 3");
}

int resolve_points(int d, const TorusQuadratureSpec& q) {
    const int n = q.points_per_dim > 0 ? q.points_per_dim : default_points_per_dim(d);
    if (n < 8 || n % 4 != 0) throw InputError("points_per_dim must be a multiple of 4, at least 8");
    return n;
}

// Orthant grid values of f at midpoints (i + 1/2) h, h = 2 pi / n, i < n/2.
std::vector<double> orthant_values(int d, int n, const std::function<double(double, double)>& f) {
    const int half = n / 2;
    const double h = 2.0 * pi / n;
    std::vector<double> phi1(static_cast<std::size_t>(half)), sq1(static_cast<std::size_t>(half));
    for (int i = 0; i < half; ++i) {
        const double x = (i + 0.5) * h;
        const double sh = std::sin(0.5 * x);
        phi1[static_cast<std::size_t>(i)] = 4.0 * sh * sh;
        sq1[static_cast<std::size_t>(i)] = x * x;
    }
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(half);
    std::vector<double> out(total);
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < total; ++flat) {
        double phi = 0.0, sq = 0.0;
        for (int j = 0; j < d; ++j) {
            phi += phi1[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            sq += sq1[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        }
        out[flat] = f(phi, sq);
        for (int j = d - 1; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < half) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
    }
    return out;
}

// (2/n)^d sum_i values(i) prod_j cos(k_j xi_{i_j}): the full-torus average of an
// even function against e^{i k.xi}.
double orthant_cos_sum(int d, int n, std::span<const double> values, const LatticePoint& k) {
    const int half = n / 2;
    const double h = 2.0 * pi / n;
    std::array<std::vector<double>, 3> cosines;
    for (int j = 0; j < d; ++j) {
        auto& c = cosines[static_cast<std::size_t>(j)];
        c.resize(static_cast<std::size_t>(half));
        for (int i = 0; i < half; ++i) c[static_cast<std::size_t>(i)] = std::cos(k[j] * (i + 0.5) * h);
    }
    const auto hs = static_cast<std::size_t>(half);
    double total = 0.0;
    if (d == 1) {
        for (std::size_t i = 0; i < hs; ++i) total += values[i] * cosines[0][i];
    } else if (d == 2) {
        for (std::size_t i = 0; i < hs; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < hs; ++j) row += values[i * hs + j] * cosines[1][j];
            total += row * cosines[0][i];
        }
    } else {
        for (std::size_t i = 0; i < hs; ++i) {
            double plane = 0.0;
            for (std::size_t j = 0; j < hs; ++j) {
                double row = 0.0;
                const std::size_t base = (i * hs + j) * hs;
                for (std::size_t l = 0; l < hs; ++l) row += values[base + l] * cosines[2][l];
                plane += row * cosines[1][j];
            }
            total += plane * cosines[0][i];
        }
    }
    return total * std::pow(2.0 / n, d);
}

// |S^{d-1}|
double sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        default: return 4.0 * pi;
    }
}

// Spherical average of e^{i k.xi} over |xi| = r as a function of z = |k| r.
double spherical_average(int d, double z) {
    switch (d) {
        case 1: return std::cos(z);
        case 2: return bessel_j(0.0, z);
        default: {
            if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
            return std::sin(z) / z;
        }
    }
}

// Taylor coefficient of z^{2m} in the spherical average.
double spherical_average_coef(int d, int m) {
    double c = 1.0;
    for (int i = 1; i <= m; ++i) {
        switch (d) {
            case 1: c *= -1.0 / ((2.0 * i - 1.0) * (2.0 * i)); break;
            case 2: c *= -1.0 / (4.0 * i * i); break;
            default: c *= -1.0 / ((2.0 * i) * (2.0 * i + 1.0)); break;
        }
    }
    return c;
}

}  // namespace

KernelValue torus_grid_integral(int d, const LatticePoint& k, int points_per_dim,
                                const std::function<double(double, double)>& f) {
    check_dim(d);
    if (k.dim() != d) throw InputError("offset dimension does not match d");
    if (points_per_dim < 8 || points_per_dim % 4 != 0) throw InputError("points_per_dim must be a multiple of 4, at least 8");
    const auto fine = orthant_values(d, points_per_dim, f);
    const auto coarse = orthant_values(d, points_per_dim / 2, f);
    const double value = orthant_cos_sum(d, points_per_dim, fine, k);
    const double rough = orthant_cos_sum(d, points_per_dim / 2, coarse, k);
    return {value, std::abs(value - rough)};
}

Multiplier Multiplier::phi_power(double s) {
    if (!(s > 0.0 && s <= 1.0)) throw InputError("phi_power: s must lie in (0, 1]");
    return {Type::phi_power, s, 0.0};
}

Multiplier Multiplier::log_phi() { return {Type::log_phi, 0.0, 0.0}; }

Multiplier Multiplier::exp_minus_t_phi_power(double t, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw InputError("exp_minus_t_phi_power: s must lie in (0, 1]");
    if (!(t >= 0.0)) throw InputError("exp_minus_t_phi_power: t must be nonnegative");
    return {Type::exp_minus_t_phi_power, s, t};
}

Multiplier Multiplier::phi_minus_t(double t) {
    if (!(t >= 0.0)) throw InputError("phi_minus_t: t must be nonnegative");
    return {Type::phi_minus_t, 0.0, t};
}

double Multiplier::of_symbol(double phi) const {
    switch (type_) {
        case Type::phi_power: return std::pow(phi, s_);
        case Type::log_phi: return std::log(phi);
        case Type::exp_minus_t_phi_power: return std::exp(-t_ * std::pow(phi, s_));
        case Type::phi_minus_t: return std::pow(phi, -t_);
    }
    return 0.0;
}

double Multiplier::model(double radius) const {
    switch (type_) {
        case Type::phi_power: return std::pow(radius, 2.0 * s_);
        case Type::log_phi: return 2.0 * std::log(radius);
        case Type::exp_minus_t_phi_power: return std::exp(-t_ * std::pow(radius, 2.0 * s_));
        case Type::phi_minus_t: return std::pow(radius, -2.0 * t_);
    }
    return 0.0;
}

std::string Multiplier::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (type_) {
        case Type::phi_power: os << "phi_power(s=" << s_ << ")"; break;
        case Type::log_phi: os << "log_phi"; break;
        case Type::exp_minus_t_phi_power: os << "exp_minus_t_phi_power(t=" << t_ << ",s=" << s_ << ")"; break;
        case Type::phi_minus_t: os << "phi_minus_t(t=" << t_ << ")"; break;
    }
    return os.str();
}

MultiplierKernel::MultiplierKernel(int d, Multiplier m, TorusQuadratureSpec q) : d_(d), m_(m), q_(q), n_(0) {
    check_dim(d);
    n_ = resolve_points(d, q);
    if (!(q.split_radius > 0.0 && q.split_radius < 1.0)) throw InputError("split radius must lie in (0, 1)");
    if (m.type() == Multiplier::Type::phi_minus_t && !(m.t() < 0.5 * d)) {
        throw LifespanError("log-diffusion kernel converges only for 0 <= t < d/2; got t = " + std::to_string(m.t()) +
                            " with d = " + std::to_string(d));
    }
    // Integer powers of Phi are trigonometric polynomials; no singular split needed.
    split_ = !((m.type() == Multiplier::Type::phi_power || m.type() == Multiplier::Type::exp_minus_t_phi_power) &&
               m.s() == 1.0);
    fine_ = build_grid(n_);
    coarse_ = build_grid(n_ / 2);
}

MultiplierKernel::Grid MultiplierKernel::build_grid(int n) const {
    Grid g;
    g.half = n / 2;
    g.h = 2.0 * pi / n;
    const double delta = q_.split_radius;
    const CutoffFamily family = q_.cutoff;
    const Multiplier m = m_;
    const bool split = split_;
    g.values = orthant_values(d_, n, [&](double phi, double sq) {
        double value = m.of_symbol(phi);
        const double r = std::sqrt(sq);
        if (split && r < delta) value -= cutoff(family, r / delta) * m.model(r);
        return value;
    });
    return g;
}

double MultiplierKernel::grid_sum(const Grid& g, const LatticePoint& k) const {
    return orthant_cos_sum(d_, 2 * g.half, g.values, k);
}

KernelValue MultiplierKernel::ball_term(double kappa) const {
    if (!split_) return {};
    const double delta = q_.split_radius;
    // Inner radius where psi = 1 and the integrand is a convergent double series.
    double rho = std::min(0.5 * delta, 0.5 / std::max(kappa, 1.0));
    if (m_.type() == Multiplier::Type::exp_minus_t_phi_power && m_.t() > 0.0) {
        rho = std::min(rho, std::pow(0.5 / m_.t(), 1.0 / (2.0 * m_.s())));
    }
    // int_0^rho model(r) r^a dr
    auto moment = [&](double a) -> double {
        switch (m_.type()) {
            case Multiplier::Type::phi_power: {
                const double e = 2.0 * m_.s() + a + 1.0;
                return std::pow(rho, e) / e;
            }
            case Multiplier::Type::phi_minus_t: {
                const double e = -2.0 * m_.t() + a + 1.0;
                return std::pow(rho, e) / e;
            }
            case Multiplier::Type::log_phi: {
                const double e = a + 1.0;
                return std::pow(rho, e) * (2.0 * std::log(rho) / e - 2.0 / (e * e));
            }
            case Multiplier::Type::exp_minus_t_phi_power: {
                double total = 0.0, coef = 1.0;
                for (int n = 0; n < 200; ++n) {
                    const double e = 2.0 * m_.s() * n + a + 1.0;
                    const double term = coef * std::pow(rho, e) / e;
                    total += term;
                    if (n > 2 && std::abs(term) < 1e-18 * std::abs(total)) break;
                    coef *= -m_.t() / (n + 1);
                }
                return total;
            }
        }
        return 0.0;
    };
    double inner = 0.0;
    for (int m = 0; m < 60; ++m) {
        const double term = spherical_average_coef(d_, m) * std::pow(kappa, 2 * m) * moment(2.0 * m + d_ - 1.0);
        inner += term;
        if (kappa == 0.0 || (m > 1 && std::abs(term) < 1e-18 * std::abs(inner))) break;
    }

    std::vector<double> breaks{rho};
    if (rho < 0.5 * delta) breaks = geometric_breaks(rho, 0.5 * delta, 2.0);
    if (kappa > 0.0) {
        const double period = pi / kappa;
        for (double r = rho + period; r < delta; r += period) breaks.push_back(r);
    }
    for (int i = 1; i < 8; ++i) breaks.push_back(0.5 * delta * (1.0 + i / 8.0));
    breaks.push_back(delta);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const CutoffFamily family = q_.cutoff;
    const int d = d_;
    const Multiplier m = m_;
    QuadratureOptions opts;
    opts.abs_tol = 1e-17;
    opts.rel_tol = 1e-13;
    opts.max_evaluations = 2000000;
    const QuadratureResult outer = integrate(
        [&](double r) {
            return cutoff(family, r / delta) * m.model(r) * spherical_average(d, kappa * r) * std::pow(r, d - 1);
        },
        breaks, opts);
    const double scale = sphere_area(d_) / std::pow(2.0 * pi, d_);
    return {scale * (inner + outer.value), scale * outer.abs_error_estimate};
}

KernelValue MultiplierKernel::operator()(const LatticePoint& k) {
    if (k.dim() != d_) throw InputError("offset dimension does not match d");
    const LatticePoint key = k.canonical();
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    if (8 * key.linf() > n_) {
        throw BudgetError("grid with " + std::to_string(n_) + " points per dimension does not resolve offset " +
                          k.to_string() + " (need at least 8 |k|_inf)");
    }
    const double fine = grid_sum(fine_, key);
    const double coarse = grid_sum(coarse_, key);
    const KernelValue ball = ball_term(key.l2());
    KernelValue out{fine + ball.value, std::abs(fine - coarse) + ball.error_estimate};
    cache_.emplace(key, out);
    return out;
}

KernelValue multiplier_kernel(int d, const Multiplier& m, const LatticePoint& k, const TorusQuadratureSpec& q) {
    MultiplierKernel kernel(d, m, q);
    return kernel(k);
}

KernelValue ps_kernel(int d, double s, double t, const LatticePoint& k, const TorusQuadratureSpec& q) {
    if (!(s > 0.0 && s <= 1.0)) throw InputError("ps_kernel: s must lie in (0, 1]");
    if (!(t >= 0.0)) throw InputError("ps_kernel: t must be nonnegative");
    if (k.dim() != d) throw InputError("offset dimension does not match d");
    if (t == 0.0) return {k.is_origin() ? 1.0 : 0.0, 0.0};
    KernelValue v = multiplier_kernel(d, Multiplier::exp_minus_t_phi_power(t, s), k, q);
    // Quadrature noise below zero is clamped; p_s is a positive kernel.
    if (v.value < 0.0 && v.value > -1e-14) v.value = 0.0;
    return v;
}

KernelValue plog_kernel(int d, double t, const LatticePoint& k, const TorusQuadratureSpec& q) {
    if (!(t >= 0.0)) throw InputError("plog_kernel: t must be nonnegative");
    if (!(t < 0.5 * d)) {
        throw LifespanError("log-diffusion kernel converges only for 0 <= t < d/2; got t = " + std::to_string(t) +
                            " with d = " + std::to_string(d));
    }
    if (k.dim() != d) throw InputError("offset dimension does not match d");
    if (t == 0.0) return {k.is_origin() ? 1.0 : 0.0, 0.0};
    KernelValue v = multiplier_kernel(d, Multiplier::phi_minus_t(t), k, q);
    if (v.value < 0.0 && v.value > -1e-14) v.value = 0.0;
    return v;
}

double multiplier_apply(MultiplierKernel& kernel, const LatticeFunction& u, const LatticePoint& x) {
    if (u.dim() != kernel.dim() || x.dim() != kernel.dim()) throw InputError("dimension mismatch in multiplier_apply");
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) total += kernel(x - u.support()[i]).value * u.values()[i];
    return total;
}

double multiplier_apply(int d, const Multiplier& m, const LatticeFunction& u, const LatticePoint& x,
                        const TorusQuadratureSpec& q) {
    MultiplierKernel kernel(d, m, q);
    return multiplier_apply(kernel, u, x);
}

SemigroupGap semigroup_check_ps(int d, double s, double t1, double t2, const LatticePoint& k, int max_radius,
                                const TorusQuadratureSpec& q) {
    if (k.dim() != d) throw InputError("offset dimension does not match d");
    SemigroupGap out;
    const auto direct = ps_kernel(d, s, t1 + t2, k, q);
    out.direct = direct.value;
    if (t1 == 0.0 || t2 == 0.0) {
        // One factor is the identity; the convolution collapses to a single term.
        out.convolution = direct.value;
        out.gap = 0.0;
        return out;
    }
    MultiplierKernel first(d, Multiplier::exp_minus_t_phi_power(t1, s), q);
    MultiplierKernel second(d, Multiplier::exp_minus_t_phi_power(t2, s), q);
    double total = 0.0;
    for (const LatticePoint& z : l1_ball(d, max_radius)) total += first(z).value * second(k - z).value;
    out.convolution = total;
    out.gap = std::abs(total - out.direct);
    return out;
}

double cycle_multiplier_kernel(int n, const Multiplier& m, int x) {
    if (n < 3) throw InputError("cycle needs at least 3 vertices");
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double sh = std::sin(pi * j / n);
        const double lambda = 4.0 * sh * sh;
        if (j == 0 && m.type() == Multiplier::Type::log_phi) continue;
        const double value = (j == 0 && m.type() == Multiplier::Type::phi_power) ? 0.0 : m.of_symbol(lambda);
        total += value * std::cos(2.0 * pi * static_cast<double>((static_cast<long long>(j) * x) % n) / n);
    }
    return total / n;
}

}  // namespace fraclog
