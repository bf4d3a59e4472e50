#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraclog {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    std::size_t max_evaluations = 400000;
};

// 21-point Kronrod rule with its embedded 10-point Gauss rule on [-1, 1].
// Index 0 is the centre; gauss_weight is zero for Kronrod-only nodes.
struct KronrodRule {
    std::array<double, 11> abscissa{};
    std::array<double, 11> kronrod_weight{};
    std::array<double, 11> gauss_weight{};
};
const KronrodRule& kronrod21();

struct PanelEstimate {
    double kronrod = 0.0;
    double gauss = 0.0;
    double abs_integral = 0.0;
};
PanelEstimate apply_kronrod21(const std::function<double(double)>& f, double a, double b);

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod over the union of the intervals between
// consecutive breakpoints. Throws BudgetError when the tolerance cannot be met.
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options = {});

// Breakpoints a, a*r, a*r^2, ... up to b (geometric grading toward the end with
// the smaller magnitude). Used for integrands with multiscale structure near 0.
std::vector<double> geometric_breaks(double lo, double hi, double ratio);

}  // namespace fraclog
