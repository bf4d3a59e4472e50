#pragma once

#include "fraclog/graph.hpp"
#include "fraclog/lattice_point.hpp"
#include "fraclog/spectral.hpp"
#include "fraclog/torus.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fraclog {

enum class HeatMethod { bessel_closed_form, fourier_quadrature, window_spectral };
std::string_view to_string(HeatMethod method);

struct HeatKernelEval {
    double value = 0.0;
    HeatMethod method = HeatMethod::bessel_closed_form;
    double error_estimate = 0.0;
};

// p(t, 0, k) = e^{-2dt} prod_j I_{k_j}(2t) on the standard lattice.
HeatKernelEval heat_kernel_zd(int d, double t, const LatticePoint& k);

// d^m/dt^m p(t, 0, k), exact through the heat equation (Delta^m p)(k).
double heat_kernel_zd_derivative(int d, double t, const LatticePoint& k, int order = 1);

// (2 pi)^{-d} int e^{-t Phi(xi)} cos(k.xi) dxi on the midpoint grid.
HeatKernelEval heat_kernel_fourier(int d, double t, const LatticePoint& k, const TorusQuadratureSpec& q = {});

// Taylor coefficients of prod_j I_{k_j}(2t): entry i multiplies t^{|k|_1 + i}.
std::vector<double> heat_series_coefficients(int d, const LatticePoint& k, int terms);

// Large-time expansion p(t, 0, k) ~ (4 pi t)^{-d/2} sum_m b_m t^{-m}.
std::vector<double> heat_large_time_coefficients(int d, const LatticePoint& k, int terms);

// Box [-radius, radius]^d of Z^d as a finite weighted graph with unit edge
// weights and the given measure (mu = 1 when empty).
class WindowLattice {
public:
    WindowLattice(int d, int radius, const std::function<double(const LatticePoint&)>& measure = {});
    int dim() const { return d_; }
    int radius() const { return radius_; }
    const WeightedGraph& graph() const { return graph_; }
    Vertex index(const LatticePoint& x) const;
    LatticePoint point(Vertex v) const;

private:
    int d_;
    int radius_;
    WeightedGraph graph_;
};

// Radius that keeps the pair at l1 distance max(4 sqrt(2dt), 2dt) from the boundary.
int window_radius_for(int d, double t, const LatticePoint& x, const LatticePoint& y);

// Heat kernel of a window graph, p(t,x,y) = (e^{t Delta} 1_y)(x) / mu(y).
class WindowHeatKernel {
public:
    explicit WindowHeatKernel(WindowLattice window);
    HeatKernelEval operator()(double t, const LatticePoint& x, const LatticePoint& y) const;
    const WindowLattice& window() const { return window_; }

private:
    WindowLattice window_;
    SpectralDecomposition dec_;
};

HeatKernelEval heat_kernel_window(const WindowLattice& window, double t, const LatticePoint& x, const LatticePoint& y);

// p'(0, 0, k) by forward differences with five Richardson steps.
double heat_derivative_at_zero(int d, const LatticePoint& k);

struct IdentityCheck {
    std::string name;
    std::string where;
    double measured = 0.0;
    double target = 0.0;  // equality target, or the bound for inequality checks
    double margin = 0.0;  // tolerance minus deviation (equality) or bound minus measured (inequality)
    bool pass = false;
};

struct DerivativeReport {
    int d = 1;
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

// Small-time identities and bounds for the standard lattice:
//  - mu(x) mu(y) p'(0,x,y) = w_xy for x != y
//  - |d^k/dt^k p(t,x,y)| <= 2^k / mu_min, checked where mu = degree (normalized
//    lattice, p_norm(t) = p(t/2d)/2d) and, with the bound (4d)^k, on the standard lattice
//  - sum_y d/dt p(t,x,y) mu(y) = 0
//  - S(t) = sum_{y != x} p(t,x,y) t^{-1-s} <= C_x t^{-s} on (0, 1]
DerivativeReport derivative_identity_checks(int d, std::span<const std::pair<LatticePoint, LatticePoint>> pairs,
                                            std::span<const double> t_grid);

struct GaussianFitReport {
    int d = 1;
    double upper_constant = 0.0;      // sup p(t,0,k) V(0, sqrt t)
    double lower_rate = 0.0;          // c' in exp(-c' |k|^2 / t), least squares
    double lower_constant = 0.0;      // inf p V exp(c' |k|^2 / t) with |k|_1 <= t
    double diagonal_constant = 0.0;   // sup p(t,0,0) V(0, sqrt t)
    double factorial_constant = 0.0;  // sup_{t <= 1} p(t,0,k) |k|_1!
    std::size_t samples = 0;
    bool finite = false;
};

GaussianFitReport gaussian_bound_fit(int d, std::span<const double> t_list, int k_max);

struct HeatSweepRow {
    double t = 0.0;
    LatticePoint k;
    HeatKernelEval eval;
};

// CSV columns: d,t,k1..kd,value,method,err_est
void write_heat_csv(std::ostream& out, int d, std::span<const HeatSweepRow> rows);

}  // namespace fraclog
