#pragma once

#include "fraclog/graph.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace fraclog {

// Eigenpairs of -Delta, orthonormal in l^2(V, mu).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending, nonnegative
    Eigen::MatrixXd eigenvectors;     // column j is phi_j
    std::vector<double> measure;
    double max_residual = 0.0;
    std::size_t zero_modes = 0;  // eigenvalues treated as exactly zero
};

SpectralDecomposition decompose(const WeightedGraph& g);

enum class ZeroMode { include, skip };

// sum_j f(lambda_j) <u, phi_j> phi_j; with ZeroMode::skip the zero eigenvalues
// are left out.
std::vector<double> apply_function(const SpectralDecomposition& dec, const std::function<double(double)>& f,
                                   std::span<const double> u, ZeroMode zero = ZeroMode::include);

std::vector<double> frac_laplacian_spectral(const SpectralDecomposition& dec, double s, std::span<const double> u);
std::vector<double> log_laplacian_spectral(const SpectralDecomposition& dec, std::span<const double> u);
std::vector<double> heat_apply(const SpectralDecomposition& dec, double t, std::span<const double> u);

// Projection onto constants, E({0})u, for a connected graph.
std::vector<double> mean_projection(const WeightedGraph& g, std::span<const double> u);

double inner_product(std::span<const double> mu, std::span<const double> u, std::span<const double> v);
double norm_l2(std::span<const double> mu, std::span<const double> u);

enum class TailBound { spectral_gap, gaussian };

struct TimeQuadratureSpec {
    double split_point = 1.0;
    double tolerance = 1e-12;  // absolute, scaled by max(1, |u|)
    double t_max = 0.0;        // 0 selects the spectral-gap truncation
    TailBound tail = TailBound::spectral_gap;
    int max_rounds = 40;
};

struct BochnerResult {
    std::vector<double> value;
    double error_estimate = 0.0;
    double t_max = 0.0;
    std::size_t evaluations = 0;
};

// (s / Gamma(1-s)) int_0^inf (u - e^{t Delta} u) t^{-1-s} dt, with the heat
// flow computed by Taylor stepping of Delta (no eigendecomposition).
BochnerResult bochner_frac(const WeightedGraph& g, double s, std::span<const double> u,
                           const TimeQuadratureSpec& q = {});

// int_0^inf (e^{-t} u - e^{t Delta} u) / t dt for mean-zero u.
BochnerResult bochner_log(const WeightedGraph& g, std::span<const double> u, const TimeQuadratureSpec& q = {});

enum class ProbeMode { s_to_0, s_to_1, diff_quotient };

std::vector<double> convergence_probe_finite(const WeightedGraph& g, std::span<const double> u, ProbeMode mode,
                                             std::span<const double> s_list);

// Heat flow e^{t Delta} acting on vectors by Taylor stepping.
class HeatPropagator {
public:
    explicit HeatPropagator(const WeightedGraph& g);
    void apply_laplacian(std::span<const double> in, std::span<double> out) const;
    // v <- e^{dt Delta} v
    void advance(std::vector<double>& v, double dt) const;
    double operator_norm_bound() const { return norm_bound_; }

private:
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_;
    std::vector<double> val_;
    std::vector<double> diag_;
    double norm_bound_ = 0.0;
};

}  // namespace fraclog
