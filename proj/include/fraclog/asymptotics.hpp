#pragma once

#include "fraclog/lattice_point.hpp"
#include "fraclog/torus.hpp"

#include <span>
#include <string>
#include <vector>

namespace fraclog {

// pi^{-d/2} Gamma(d/(2s)) / (s 2^d Gamma(d/2)), the limit of t^{d/(2s)} p_s(t,x,y).
double c_sd(double s, int d);

struct CutoffSpec {
    CutoffFamily family = CutoffFamily::poly_smooth;
    std::vector<double> n_list = {64.0, 128.0, 256.0, 512.0};  // increasing truncation scales
};

// A_N = int_{R^d} |eta|^{2s} chi(|eta|/N) e^{i eta_1} d eta by the radial reduction.
double cutoff_integral(double s, int d, CutoffFamily family, double n);

// Same integral for d = 2 in polar coordinates along the direction (cos a, sin a),
// with a periodic trapezoid rule in the angle.
double cutoff_integral_polar(double s, CutoffFamily family, double n, double angle);

// d = 1 and the smooth polynomial cutoff: the tail beyond pi/2 integrated by parts twice.
double cutoff_integral_by_parts(double s, double n);

struct CutoffLimit {
    double s = 0.0;
    int d = 1;
    CutoffFamily family = CutoffFamily::poly_smooth;
    std::vector<double> n;
    std::vector<double> partial;  // A_N per scale
    double value = 0.0;      // A_N at the largest scale
    double richardson = 0.0;  // two-term fit in 1/N, for comparison only
    double stability = 0.0;   // |A_{N_last} - A_{N_prev}| / |A_{N_last}|
};

// lim_N A_N. The cutoff error oscillates and decays faster than any power of
// 1/N, so the largest scale is the estimate. Throws InputError for s = 0 or s
// outside (-d/2, 1); BudgetError when successive changes do not shrink or the
// last relative change exceeds 5e-3.
CutoffLimit a_sd(double s, int d, const CutoffSpec& spec = {});

struct CutoffReport {
    CutoffLimit primary;     // poly_smooth
    CutoffLimit alternate;   // exp_bump
    double family_gap = 0.0;     // relative
    double direction_gap = 0.0;  // relative, d = 2 only
    double value = 0.0;
    bool pass = false;  // both gaps <= 1e-4
};
CutoffReport a_sd_report(double s, int d, const std::vector<double>& n_list = CutoffSpec{}.n_list);

struct AsymptoticFit {
    double exponent = 0.0;
    double constant = 0.0;  // plateau or limit constant, after extrapolation
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

struct LawReport {
    std::string law;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<double> x;  // t or |k|
    std::vector<double> y;  // kernel values
    AsymptoticFit fit;
    double reference_exponent = 0.0;
    double reference_constant = 0.0;
    double exponent_err = 0.0;
    double rel_err = 0.0;
    double exponent_tol = 0.0;
    double constant_tol = 0.0;
    bool pass = false;
};

// p_s(t, 0, 0) over t_list; exponent against -d/(2s), t^{d/(2s)} p_s at the
// largest t against c_sd (tolerances 1e-2 and 1%).
LawReport large_time_fit(int d, double s, std::span<const double> t_list, const TorusQuadratureSpec& q = {});

// |k|^{d+2s} p_s(t, 0, k e_1), Richardson in 1/|k| over the two largest |k|,
// against -t A_{s,d} / (2 pi)^d (exponent within 0.1, plateau within 5%).
LawReport tail_fit_ps(int d, double s, double t, std::span<const int> k_list, const TorusQuadratureSpec& q = {});

// |k|^{d-2t} p_log(t, 0, k e_1) against A_{-t,d} / (2 pi)^d.
LawReport tail_fit_plog(int d, double t, std::span<const int> k_list, const TorusQuadratureSpec& q = {});

struct BlowupReport {
    int d = 1;
    LatticePoint k;
    std::vector<double> gap;      // d - 2t
    std::vector<double> product;  // (d - 2t) p_log(t, 0, k)
    double limit = 0.0;           // linear extrapolation in the gap
    double sphere = 0.0;          // |S^{d-1}|
    double sphere_normalized = 0.0;  // |S^{d-1}| / (2 pi)^d
    double rel_err_sphere = 0.0;
    double rel_err_normalized = 0.0;
    std::string matches;  // "sphere", "sphere_normalized" or "neither"
    bool increasing = false;
    // Set when the limit matches |S^{d-1}|/(2 pi)^d rather than the bare |S^{d-1}|.
    bool discrepancy = false;
    std::string note;
};
BlowupReport blowup_fit_plog(int d, const LatticePoint& k, std::span<const double> gap_list, const TorusQuadratureSpec& q = {});

}  // namespace fraclog
