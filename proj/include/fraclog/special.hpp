#pragma once

#include "fraclog/quadrature.hpp"

namespace fraclog {

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double pi = 3.14159265358979323846;

// Gamma function, Lanczos approximation with reflection for x < 1/2.
// Throws InputError at the poles 0, -1, -2, ...
double gamma_fn(double x);

// log |Gamma(x)|.
double log_gamma(double x);

// sin(pi x) with exact argument reduction.
double sin_pi(double x);

// Reciprocal Gamma, finite everywhere (zero at the poles of Gamma).
double rgamma(double x);

// Scaled modified Bessel function e^{-z} I_n(z) for integer n and z >= 0.
// Periodic trapezoid rule on the integral (1/pi) int_0^pi e^{z cos th} cos(n th),
// evaluated on the contour shifted through the saddle point so that the
// summands do not cancel.
double bessel_i_scaled(int n, double z);

// I_n(z). Throws BudgetError when the unscaled value overflows.
double bessel_i(int n, double z);

// Ascending series for I_n(z); cross-check for small z.
double bessel_i_series(int n, double z);

// Bessel function of the first kind J_nu(r), -1/2 <= nu <= 4, r >= 0.
double bessel_j(double nu, double r);

// The two branches of bessel_j, exposed for overlap validation.
double bessel_j_series(double nu, double r);
double bessel_j_asymptotic(double nu, double r);

// Crossover radius between the series and the asymptotic expansion of J for
// general orders. Integer and half-integer orders use exact routes on
// (bessel_j_series_limit, bessel_j_asymptotic_start].
inline constexpr double bessel_j_crossover = 20.0;
inline constexpr double bessel_j_series_limit = 8.0;
inline constexpr double bessel_j_asymptotic_start = 30.0;

// J_n(r) = (1/2pi) int_0^{2pi} cos(n th - r sin th) d th by the periodic trapezoid rule.
double bessel_j_integral(int n, double r);

struct EulerSplit {
    QuadratureResult near_zero;  // int_0^1 (e^{-t} - 1)/t dt
    QuadratureResult tail;       // int_1^inf e^{-t}/t dt
    double sum = 0.0;
};

EulerSplit euler_split();

// Sum of the two split integrals; equals -euler_gamma.
double euler_split_check();

}  // namespace fraclog
