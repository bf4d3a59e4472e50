#pragma once

#include "fraclog/lattice_point.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fraclog {

// Smooth radial cutoff: 1 on [0, 1/2], 0 on [1, inf).
enum class CutoffFamily {
    poly_smooth,  // degree-17 polynomial transition, C^8
    exp_bump,     // exp(-1/x) transition, C^inf
};
double cutoff(CutoffFamily family, double x);
std::string_view to_string(CutoffFamily family);
CutoffFamily parse_cutoff(std::string_view name);

struct TorusQuadratureSpec {
    int points_per_dim = 0;    // 0 selects default_points_per_dim(d); must be even
    double split_radius = 0.5;  // delta: the singular model is removed on |xi| < delta
    CutoffFamily cutoff = CutoffFamily::poly_smooth;
};

int default_points_per_dim(int d);

struct KernelValue {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Phi(xi) = sum_j (2 - 2 cos xi_j).
double symbol_phi(std::span<const double> xi);

// (2 pi)^{-d} int_{[-pi,pi]^d} f(Phi(xi), |xi|^2) cos(k.xi) dxi on the offset
// midpoint grid with n points per dimension. The error estimate is the
// difference to the grid with n/2 points.
KernelValue torus_grid_integral(int d, const LatticePoint& k, int points_per_dim,
                                const std::function<double(double phi, double radius_sq)>& f);

// Radial functions of Phi used as Fourier multipliers.
class Multiplier {
public:
    enum class Type { phi_power, log_phi, exp_minus_t_phi_power, phi_minus_t };

    static Multiplier phi_power(double s);
    static Multiplier log_phi();
    static Multiplier exp_minus_t_phi_power(double t, double s);
    static Multiplier phi_minus_t(double t);

    Type type() const { return type_; }
    double s() const { return s_; }
    double t() const { return t_; }
    double of_symbol(double phi) const;   // m(Phi)
    double model(double radius) const;    // leading behaviour of m(Phi(xi)) at xi = 0, |xi| = radius
    std::string describe() const;

private:
    Multiplier(Type type, double s, double t) : type_(type), s_(s), t_(t) {}
    Type type_;
    double s_ = 1.0;
    double t_ = 0.0;
};

// Convolution kernel K(k) = (2 pi)^{-d} int m(Phi(xi)) e^{i k.xi} dxi.
// The model term psi(|xi|) model(|xi|) is subtracted on the grid and added
// back as a radial integral against the spherical average of e^{i k.xi}.
// Values are cached per canonical offset.
class MultiplierKernel {
public:
    MultiplierKernel(int d, Multiplier m, TorusQuadratureSpec q = {});
    KernelValue operator()(const LatticePoint& k);
    int dim() const { return d_; }
    const Multiplier& multiplier() const { return m_; }
    int points_per_dim() const { return n_; }
    // Radial part alone, (2 pi)^{-d} |S^{d-1}| int_0^delta psi model j_d(|k| r) r^{d-1} dr.
    KernelValue ball_term(double radius_k) const;

private:
    struct Grid {
        int half = 0;  // points per dimension on [0, pi]
        double h = 0.0;
        std::vector<double> values;
    };
    Grid build_grid(int n) const;
    double grid_sum(const Grid& g, const LatticePoint& k) const;

    int d_;
    Multiplier m_;
    TorusQuadratureSpec q_;
    int n_;
    bool split_ = true;
    Grid fine_;
    Grid coarse_;
    std::map<LatticePoint, KernelValue> cache_;
};

KernelValue multiplier_kernel(int d, const Multiplier& m, const LatticePoint& k, const TorusQuadratureSpec& q = {});

// Fractional diffusion kernel p_s(t, 0, k), inverse transform of e^{-t Phi^s}.
KernelValue ps_kernel(int d, double s, double t, const LatticePoint& k, const TorusQuadratureSpec& q = {});

// Log-diffusion kernel p_log(t, 0, k), inverse transform of Phi^{-t}; requires
// 0 <= t < d/2 (LifespanError otherwise).
KernelValue plog_kernel(int d, double t, const LatticePoint& k, const TorusQuadratureSpec& q = {});

// f(-Delta)u(x) = sum_y K(x - y) u(y).
double multiplier_apply(MultiplierKernel& kernel, const LatticeFunction& u, const LatticePoint& x);
double multiplier_apply(int d, const Multiplier& m, const LatticeFunction& u, const LatticePoint& x,
                        const TorusQuadratureSpec& q = {});

struct SemigroupGap {
    double convolution = 0.0;  // sum_{|z|_1 <= Z} p_s(t1, 0, z) p_s(t2, z, k)
    double direct = 0.0;       // p_s(t1 + t2, 0, k)
    double gap = 0.0;
};
SemigroupGap semigroup_check_ps(int d, double s, double t1, double t2, const LatticePoint& k, int max_radius,
                                const TorusQuadratureSpec& q = {});

// The same multiplier on the cycle Z_n: (1/n) sum_j m(lambda_j) cos(2 pi j x / n),
// lambda_j = 2 - 2 cos(2 pi j / n); the j = 0 term is dropped for log_phi.
double cycle_multiplier_kernel(int n, const Multiplier& m, int x);

}  // namespace fraclog
