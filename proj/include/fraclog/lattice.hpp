#pragma once

#include "fraclog/lattice_point.hpp"
#include "fraclog/spectral.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

namespace fraclog {

struct KernelEntry {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Time moments of the standard-lattice heat kernel p(t, 0, k).
//   small: int_0^1 p t^{-1-q} dt for k != 0 (q < 1); for k = 0 the integrand
//          is (1 - p) t^{-1-q}. Exact series, no quadrature.
//   large: int_1^inf p t^{-1-q} dt (q > -d/2). Gauss-Kronrod up to T plus the
//          large-time expansion of p beyond T.
KernelEntry heat_moment_small(int d, const LatticePoint& k, double q);
KernelEntry heat_moment_large(int d, const LatticePoint& k, double q, double tol);

// W_s(k) = (s / Gamma(1-s)) int_0^inf p(t,0,k) t^{-1-s} dt, k != 0.
KernelEntry w_s(int d, double s, const LatticePoint& k, double tol = 1e-11);
// W_log(k) = int_0^1 p(t,0,k) / t dt, k != 0.
KernelEntry w_log(int d, const LatticePoint& k, double tol = 1e-11);
// W(k) = int_1^inf p(t,0,k) / t dt.
KernelEntry w_long(int d, const LatticePoint& k, double tol = 1e-11);

// Upper bound for sum_{|k|_1 > radius} W_log(k), from p(t,0,k) <= (2dt)^r / r!.
double wlog_tail_bound(int d, int radius);

enum class KernelKind { w_s, w_log, w_long };
std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

// Memoized kernel values for one dimension, keyed by canonical offset.
class KernelCache {
public:
    explicit KernelCache(int d, double tol = 1e-11);
    int dim() const { return d_; }
    double tolerance() const { return tol_; }

    KernelEntry w_s(double s, const LatticePoint& k);
    KernelEntry w_log(const LatticePoint& k);
    KernelEntry w_long(const LatticePoint& k);
    KernelEntry get(KernelKind kind, double s, const LatticePoint& k);

    // sum_{k != 0} W_s(k) = (s / Gamma(1-s)) int_0^inf (1 - p(t,0,0)) t^{-1-s} dt.
    KernelEntry frac_row_sum(double s);
    // sum_{k != 0} W_log(k), truncated where the factorial tail bound drops
    // below the tolerance; the bound is included in the error estimate.
    KernelEntry log_row_sum();
    int log_row_radius() const;

private:
    int d_;
    double tol_;
    std::map<std::tuple<int, double, LatticePoint>, KernelEntry> cache_;
    std::map<double, KernelEntry> frac_rows_;
    bool have_log_row_ = false;
    KernelEntry log_row_;
};

struct KernelTable {
    KernelKind kind = KernelKind::w_long;
    int d = 1;
    double s = 0.0;
    int radius = 0;  // l1 radius
    std::vector<std::pair<LatticePoint, KernelEntry>> entries;  // lexicographic
};

// All offsets with |k|_1 <= radius (k = 0 omitted for w_s and w_log).
KernelTable build_kernel_table(KernelCache& cache, KernelKind kind, double s, int radius);

// CSV columns: kind,d,s,k1..kd,value,err_est
void write_kernel_csv(std::ostream& out, const KernelTable& table);

struct RowSumIdentity {
    int d = 1;
    int radius = 0;   // truncation radius of the left side
    double lhs = 0.0;  // sum_{0 < |k|_1 <= radius} W_log(k)
    double rhs = 0.0;  // int_0^1 (1 - p(t,0,0)) / t dt
    double tail_bound = 0.0;
    double gap = 0.0;
    double tol = 0.0;
    bool pass = false;
};
RowSumIdentity wlog_row_sum_identity(int d, double tol = 1e-8, int radius = 0);

// (-Delta)^s u(x) = u(x) sum_{k != 0} W_s(k) - sum_{y != x} W_s(x - y) u(y).
double frac_laplacian_pointwise(KernelCache& cache, double s, const LatticeFunction& u, const LatticePoint& x);
// log(-Delta) u(x) = sum_{y != x} W_log(x-y)(u(x) - u(y)) - sum_y W(x-y) u(y) - gamma u(x).
double log_laplacian_pointwise(KernelCache& cache, const LatticeFunction& u, const LatticePoint& x);

struct RowBound {
    int radius = 0;
    double value = 0.0;       // row sum over |k|_1 <= radius
    double tail_bound = 0.0;  // certified remainder
    double doubled = 0.0;     // row sum over |k|_1 <= 2 radius
    double gap = 0.0;         // |doubled - value|
};
RowBound log_gradient_row_bound(KernelCache& cache, int radius);

struct GrowthReport {
    std::vector<int> n;
    std::vector<double> q;  // Q_n
    double intercept = 0.0;
    double slope = 0.0;  // Q_n ~ intercept + slope log n
    double r_squared = 0.0;
    bool increasing = false;
};
// Q_n = sum_{x,y} u_n(x) u_n(y) W(x - y), u_n the normalized indicator of the l1 ball of radius n.
GrowthReport quadratic_form_growth(KernelCache& cache, std::span<const int> n_list);

struct LatticeProbe {
    ProbeMode mode = ProbeMode::diff_quotient;
    double p = 0.0;  // norm exponent; infinity for sup norm
    int window = 0;  // points with dist(x, supp u)_inf <= window are summed exactly
    std::vector<double> s;
    std::vector<double> error;       // total, window part combined with the tail
    std::vector<double> window_part;
    std::vector<double> tail_part;   // asymptotic-kernel estimate outside the window
    bool decreasing = false;
};

// Errors in l^p(Z^d) of
//   s_to_1:        (-Delta)^s u + Delta u
//   s_to_0:        (-Delta)^s u - u
//   diff_quotient: ((-Delta)^s u - u)/s - log(-Delta) u
LatticeProbe lattice_convergence_probe(KernelCache& cache, const LatticeFunction& u, ProbeMode mode,
                                       std::span<const double> s_list, double p, int window);

LatticeProbe diff_quotient_error(KernelCache& cache, const LatticeFunction& u, std::span<const double> s_list, double p,
                                 int window = 40);

}  // namespace fraclog
