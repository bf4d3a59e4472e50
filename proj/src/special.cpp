#include "fraclog/special.hpp"

#include "fraclog/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace fraclog {

namespace {

constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_coef{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double sqrt_two_pi = std::sqrt(2.0 * pi);

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Lanczos sum and shifted argument for Gamma(x), x >= 1/2.
double lanczos_sum(double xm1) {
    double a = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) a += lanczos_coef[i] / (xm1 + static_cast<double>(i));
    return a;
}

}  // namespace

double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;  // r in [0, 2)
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r < 0.5) return std::sin(pi * r);
    if (r < 1.5) return std::sin(pi * (1.0 - r));
    return -std::sin(pi * (2.0 - r));
}

double gamma_fn(double x) {
    if (std::isnan(x)) return x;
    if (is_nonpositive_integer(x)) throw InputError("gamma: pole at " + std::to_string(x));
    if (x < 0.5) return pi / (sin_pi(x) * gamma_fn(1.0 - x));
    const double xm1 = x - 1.0;
    const double t = xm1 + lanczos_g + 0.5;
    return sqrt_two_pi * std::pow(t, xm1 + 0.5) * std::exp(-t) * lanczos_sum(xm1);
}

double log_gamma(double x) {
    if (is_nonpositive_integer(x)) throw InputError("log_gamma: pole at " + std::to_string(x));
    if (x < 0.5) return std::log(pi / std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    const double xm1 = x - 1.0;
    const double t = xm1 + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

double bessel_i_scaled(int n, double z) {
    if (z < 0.0 || std::isnan(z)) throw InputError("bessel_i: negative argument");
    const double order = std::abs(static_cast<double>(n));
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    const double ratio = order / z;
    const double shift = std::asinh(ratio);
    const double stretch = std::sqrt(1.0 + ratio * ratio);
    const double scale = std::sqrt(std::sqrt(order * order + z * z));
    const int panels = static_cast<int>(std::ceil(5.0 * scale)) + 16;
    const double h = pi / panels;
    const double offset = z * (stretch - 1.0) - order * shift;
    double sum = 0.0;
    for (int j = 0; j <= panels; ++j) {
        const double th = j * h;
        const double w = (j == 0 || j == panels) ? 0.5 : 1.0;
        // z*stretch*(cos th - 1) written to avoid cancellation near th = 0.
        const double s2 = std::sin(0.5 * th);
        const double expo = offset - 2.0 * z * stretch * s2 * s2;
        sum += w * std::exp(expo) * std::cos(order * (th - std::sin(th)));
    }
    return sum / panels;
}

double bessel_i(int n, double z) {
    const double scaled = bessel_i_scaled(n, z);
    if (z > 700.0) throw BudgetError("bessel_i: I_n(z) overflows; use bessel_i_scaled");
    return scaled * std::exp(z);
}

double bessel_i_series(int n, double z) {
    if (z < 0.0) throw InputError("bessel_i_series: negative argument");
    const int m = std::abs(n);
    if (z == 0.0) return m == 0 ? 1.0 : 0.0;
    const double q = 0.25 * z * z;
    double term = std::exp(m * std::log(0.5 * z) - std::lgamma(m + 1.0));
    double sum = term;
    for (int j = 1; j < 2000; ++j) {
        term *= q / (static_cast<double>(j) * (j + m));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double bessel_j_series(double nu, double r) {
    if (nu < -0.5) throw InputError("bessel_j: order below -1/2");
    if (r < 0.0) throw InputError("bessel_j: negative argument");
    if (r == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw InputError("bessel_j: J_nu(0) is infinite for nu < 0");
    }
    const long double half = 0.5L * static_cast<long double>(r);
    const long double q = half * half;
    long double term = std::pow(half, static_cast<long double>(nu)) / static_cast<long double>(gamma_fn(nu + 1.0));
    long double sum = term;
    for (int m = 1; m < 500; ++m) {
        term *= -q / (static_cast<long double>(m) * (static_cast<long double>(m) + nu));
        sum += term;
        if (std::abs(term) < 1e-21L * (std::abs(sum) + 1e-300L) && static_cast<long double>(m) > half) break;
    }
    return static_cast<double>(sum);
}

double bessel_j_asymptotic(double nu, double r) {
    if (!(r > 0.0)) throw InputError("bessel_j_asymptotic: needs r > 0");
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;  // a_k / r^k
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * r);
        if (std::abs(term) >= last && k > 2) break;  // asymptotic series starts to diverge
        last = std::abs(term);
        const int phase = k % 4;  // P gets (-1)^{k/2} a_k for even k; Q gets (-1)^{(k-1)/2} a_k for odd k
        if (phase == 1) q += term;
        else if (phase == 2) p -= term;
        else if (phase == 3) q -= term;
        else p += term;
        if (std::abs(term) < 1e-18) break;
    }
    const double phi = (0.5 * nu + 0.25) * pi;
    const double chi_cos = std::cos(r) * std::cos(phi) + std::sin(r) * std::sin(phi);
    const double chi_sin = std::sin(r) * std::cos(phi) - std::cos(r) * std::sin(phi);
    return std::sqrt(2.0 / (pi * r)) * (p * chi_cos - q * chi_sin);
}

double bessel_j(double nu, double r) {
    if (nu < -0.5 || nu > 4.0) throw InputError("bessel_j: unsupported order " + std::to_string(nu));
    if (r < 0.0) throw InputError("bessel_j: negative argument");
    if (r <= bessel_j_series_limit) return bessel_j_series(nu, r);
    if (r > bessel_j_asymptotic_start) return bessel_j_asymptotic(nu, r);
    if (nu == std::floor(nu)) return bessel_j_integral(static_cast<int>(nu), r);
    if (2.0 * nu == std::floor(2.0 * nu)) {
        // Half-integer order: elementary start, upward recurrence is stable for nu < r.
        const double scale = std::sqrt(2.0 / (pi * r));
        double prev = scale * std::cos(r);  // J_{-1/2}
        double cur = scale * std::sin(r);   // J_{1/2}
        if (nu < 0.0) return prev;
        for (double order = 0.5; order < nu; order += 1.0) {
            const double next = (2.0 * order / r) * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    if (r <= bessel_j_crossover) return bessel_j_series(nu, r);
    return bessel_j_asymptotic(nu, r);
}

double bessel_j_integral(int n, double r) {
    if (r < 0.0) throw InputError("bessel_j: negative argument");
    const int m = static_cast<int>(std::ceil(r)) + std::abs(n) + 48;
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * pi * j / m;
        sum += std::cos(n * th - r * std::sin(th));
    }
    return sum / m;
}

EulerSplit euler_split() {
    EulerSplit out;
    QuadratureOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-15;
    out.near_zero = integrate([](double t) { return std::expm1(-t) / t; }, 0.0, 1.0, opt);
    // e^{-T}/T bounds the neglected part of the tail.
    constexpr double cut = 40.0;
    const auto breaks = geometric_breaks(1.0, cut, 2.0);
    out.tail = integrate([](double t) { return std::exp(-t) / t; }, breaks, opt);
    out.tail.abs_error_estimate += std::exp(-cut) / cut;
    out.sum = out.near_zero.value + out.tail.value;
    return out;
}

double euler_split_check() { return euler_split().sum; }

}  // namespace fraclog
