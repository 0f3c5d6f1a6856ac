#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfns/paths.hpp"
#include "sfns/rng.hpp"
#include "sfns/spectral.hpp"

namespace sfns {

// One noise mode: an L2-normalized, divergence-free, zero-mean basis field
// together with its noise amplitude sigma >= 0 and damping eigenvalue
// lambda < 0.
struct NoiseEntry {
    int mode_id = 0;
    SpectralField e;
    double sigma = 0.0;
    double lambda = -1.0;
};

// Finite noise specification: eigenpairs of the covariance/damping pair plus
// the regularity exponent xi and the Hurst parameter. The damping acts as
// lambda_i on span{e_i} and as lambda_perp on the orthogonal complement
// (lambda_perp defaults to sup_i lambda_i, i.e. -1 for the canonical case).
class NoiseSpec {
public:
    NoiseSpec() = default;
    NoiseSpec(std::vector<NoiseEntry> entries, double xi, double hurst,
              std::optional<double> lambda_perp = std::nullopt);

    const std::vector<NoiseEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double xi() const { return xi_; }
    double hurst() const { return hurst_; }
    double lambda_perp() const { return lambda_perp_; }
    int grid_n() const { return entries_.empty() ? 0 : entries_.front().e.n(); }

    // sum_i sigma_i^2 ||e_i||_{H^xi}^2 (finite by construction; reported for
    // truncation accounting)
    double hxi_weight_sum() const;
    // partial sums sum_i |sigma_i ||e_i||_{H^xi}|^{p/2} for a given p
    double summability_partial(double p) const;

    // coefficients <f, e_i>
    Eigen::VectorXd project(const SpectralField& f) const;
    // sum_i c_i e_i
    SpectralField assemble(const Eigen::VectorXd& coeffs) const;

    // (-C)^{-1} restricted to span{e_i}: divides coefficient i by |lambda_i|.
    // The component of f orthogonal to the span is returned separately as
    // `unresolved` when requested.
    SpectralField apply_neg_c_inverse(const SpectralField& f,
                                      SpectralField* unresolved = nullptr) const;

private:
    std::vector<NoiseEntry> entries_;
    double xi_ = 3.0;
    double hurst_ = 0.5;
    double lambda_perp_ = -1.0;
};

// Trig-mode description used by configs and convenience constructors.
struct TrigModeSpec {
    int kx = 1, ky = 0;
    Parity parity = Parity::sin;
    double sigma = 1.0;
    double lambda = -1.0;
};

NoiseSpec make_trig_noise(int grid_n, const std::vector<TrigModeSpec>& modes, double xi,
                          double hurst, std::optional<double> lambda_perp = std::nullopt);

// ---------------------------------------------------------------------------
// fractional Brownian motion
// ---------------------------------------------------------------------------

// R(s,t) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2
double fbm_covariance(double s, double t, double hurst);

struct FbmOptions {
    int cholesky_cap = 4096;   // reject larger grids
    double jitter = 1e-12;     // relative diagonal jitter before factorization
};

// Exact Gaussian sampling of fBm on a fixed grid via a cached Cholesky
// factor. One factorization serves any number of draws, so Monte Carlo
// ensembles on a common grid stay cheap.
class FbmSampler {
public:
    FbmSampler(std::vector<double> times, double hurst, FbmOptions opt = {});

    const std::vector<double>& times() const { return times_; }
    double hurst() const { return hurst_; }

    ScalarPath draw(RngStream& rng) const;

private:
    std::vector<double> times_;
    double hurst_;
    Eigen::MatrixXd chol_;  // lower factor for the grid without t=0
};

ScalarPath sample_fbm(const std::vector<double>& times, double hurst, RngStream& rng,
                      FbmOptions opt = {});

// ---------------------------------------------------------------------------
// fractional Ornstein-Uhlenbeck
// ---------------------------------------------------------------------------

struct FouParams {
    double lambda = 1.0;  // decay rate, > 0
    double sigma = 1.0;   // >= 0
    double hurst = 0.5;   // in (1/4, 1)
    double x0 = 0.0;

    void validate() const;
};

// dX = -lambda X dt + sigma dB^H, integrated by an exponential one-step rule
// on the grid refined by `substeps`:
//   X_{t+h} = e^{-lambda h} X_t + sigma e^{-lambda h/2} dB  (midpoint weight).
// The fBm path is generated exactly on the refined grid. The class form
// factorizes once and serves whole ensembles via replica substreams.
class FouSampler {
public:
    FouSampler(const FouParams& params, std::vector<double> grid, int substeps,
               FbmOptions opt = {});
    ScalarPath draw(std::uint64_t seed, std::uint64_t replica = 0) const;

private:
    FouParams params_;
    std::vector<double> grid_;
    int substeps_;
    FbmSampler fbm_;
};

ScalarPath sample_fou(const FouParams& params, const std::vector<double>& grid,
                      std::uint64_t seed, int substeps, FbmOptions opt = {},
                      std::uint64_t replica = 0);

// ---------------------------------------------------------------------------
// Q-fractional Wiener process and the fast Ornstein-Uhlenbeck field
// ---------------------------------------------------------------------------

// Per-mode scalar data for a sampled fast field. The Wiener coefficients are
// sigma_i B^{H,i}(t); the w coefficients follow the rescaled damping
// eps^{-1}|lambda_i| with amplitude eps^{-H} sigma_i. All matrices are
// (grid size) x (mode count).
struct FastOuPaths {
    std::vector<double> times;
    Eigen::MatrixXd w_coeffs;
    Eigen::MatrixXd wiener_coeffs;
};

// W^H_t = sum_i sigma_i e_i B^{H,i}_t with independent per-mode fBm streams.
// Identical (spec, grid, seed, replica) give bit-identical output; the same
// per-mode streams feed sample_fast_ou_field, so the Wiener path underlying a
// fast-field sample on the same grid coincides with this one bit for bit.
FieldPath sample_q_fwiener(const NoiseSpec& spec, const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t replica = 0, FbmOptions opt = {});

Eigen::MatrixXd sample_q_fwiener_coeffs(const NoiseSpec& spec, const std::vector<double>& grid,
                                        std::uint64_t seed, std::uint64_t replica = 0,
                                        FbmOptions opt = {});

// Fast field  dw = eps^{-1} C w dt + eps^{-H} dW^H,  w(0) = 0, sampled on
// `grid` with the exponential rule on the substep-refined grid. The cap in
// `opt` applies to the refined grid. The class form shares one factorization
// across replicas and epsilon values.
class FastOuSampler {
public:
    FastOuSampler(const NoiseSpec& spec, std::vector<double> grid, int substeps,
                  FbmOptions opt = {});
    FastOuPaths draw(double eps, std::uint64_t seed, std::uint64_t replica = 0) const;

private:
    NoiseSpec spec_;
    std::vector<double> grid_;
    int substeps_;
    FbmSampler fbm_;
};

FastOuPaths sample_fast_ou_paths(const NoiseSpec& spec, double eps,
                                 const std::vector<double>& grid, std::uint64_t seed,
                                 int substeps, std::uint64_t replica = 0, FbmOptions opt = {});

FieldPath sample_fast_ou_field(const NoiseSpec& spec, double eps, const std::vector<double>& grid,
                               std::uint64_t seed, int substeps, std::uint64_t replica = 0,
                               FbmOptions opt = {});

// assemble a FieldPath from per-mode coefficients
FieldPath assemble_field_path(const NoiseSpec& spec, const std::vector<double>& times,
                              const Eigen::MatrixXd& coeffs);

std::vector<double> refine_grid(const std::vector<double>& grid, int substeps);

}  // namespace sfns
