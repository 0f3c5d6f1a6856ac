#include "sfns/noise.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "sfns/errors.hpp"

namespace sfns {

NoiseSpec::NoiseSpec(std::vector<NoiseEntry> entries, double xi, double hurst,
                     std::optional<double> lambda_perp)
    : entries_(std::move(entries)), xi_(xi), hurst_(hurst) {
    if (!(hurst_ > 0.25 && hurst_ < 1.0))
        throw param_error("NoiseSpec: hurst must lie in (1/4, 1)");
    double sup_lambda = -1.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& ent = entries_[i];
        if (!(ent.lambda < 0.0)) throw param_error("NoiseSpec: every lambda must be negative");
        if (!(ent.sigma >= 0.0)) throw param_error("NoiseSpec: sigma must be nonnegative");
        if (ent.e.n() != entries_.front().e.n())
            throw structural_error("NoiseSpec: basis fields on mismatched grids");
        const double nrm = l2_norm(ent.e);
        if (std::abs(nrm - 1.0) > 1e-8)
            throw param_error("NoiseSpec: basis field " + std::to_string(ent.mode_id) +
                              " is not L2-normalized");
        if (divergence_defect(ent.e) > 1e-10)
            throw param_error("NoiseSpec: basis field " + std::to_string(ent.mode_id) +
                              " is not divergence-free");
        if (std::abs(mean_mode(ent.e)) > 1e-12)
            throw param_error("NoiseSpec: basis field " + std::to_string(ent.mode_id) +
                              " has nonzero mean");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(inner_product(ent.e, entries_[j].e)) > 1e-10)
                throw param_error("NoiseSpec: basis fields are not pairwise orthogonal");
        sup_lambda = i == 0 ? ent.lambda : std::max(sup_lambda, ent.lambda);
    }
    lambda_perp_ = lambda_perp.value_or(entries_.empty() ? -1.0 : sup_lambda);
    if (!(lambda_perp_ < 0.0)) throw param_error("NoiseSpec: lambda_perp must be negative");
}

double NoiseSpec::hxi_weight_sum() const {
    double acc = 0.0;
    for (const auto& ent : entries_) {
        const double w = sobolev_norm(ent.e, xi_);
        acc += ent.sigma * ent.sigma * w * w;
    }
    return acc;
}

double NoiseSpec::summability_partial(double p) const {
    double acc = 0.0;
    for (const auto& ent : entries_)
        acc += std::pow(std::abs(ent.sigma * sobolev_norm(ent.e, xi_)), 0.5 * p);
    return acc;
}

Eigen::VectorXd NoiseSpec::project(const SpectralField& f) const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(entries_.size()));
    for (std::size_t i = 0; i < entries_.size(); ++i)
        c[static_cast<Eigen::Index>(i)] = inner_product(f, entries_[i].e);
    return c;
}

SpectralField NoiseSpec::assemble(const Eigen::VectorXd& coeffs) const {
    if (entries_.empty()) throw structural_error("NoiseSpec::assemble: empty spec");
    if (coeffs.size() != static_cast<Eigen::Index>(entries_.size()))
        throw structural_error("NoiseSpec::assemble: coefficient count mismatch");
    SpectralField out(entries_.front().e.n());
    for (std::size_t i = 0; i < entries_.size(); ++i)
        axpy(coeffs[static_cast<Eigen::Index>(i)], entries_[i].e, out);
    return out;
}

SpectralField NoiseSpec::apply_neg_c_inverse(const SpectralField& f,
                                             SpectralField* unresolved) const {
    SpectralField out(f.n());
    SpectralField rest = f;
    for (const auto& ent : entries_) {
        const double c = inner_product(f, ent.e);
        axpy(c / std::abs(ent.lambda), ent.e, out);
        axpy(-c, ent.e, rest);
    }
    if (unresolved) *unresolved = rest;
    return out;
}

NoiseSpec make_trig_noise(int grid_n, const std::vector<TrigModeSpec>& modes, double xi,
                          double hurst, std::optional<double> lambda_perp) {
    std::vector<NoiseEntry> entries;
    entries.reserve(modes.size());
    int id = 0;
    for (const auto& m : modes) {
        NoiseEntry ent;
        ent.mode_id = id++;
        ent.e = trig_mode(grid_n, m.kx, m.ky, m.parity);
        ent.sigma = m.sigma;
        ent.lambda = m.lambda;
        entries.push_back(std::move(ent));
    }
    return NoiseSpec(std::move(entries), xi, hurst, lambda_perp);
}

// ---------------------------------------------------------------------------

double fbm_covariance(double s, double t, double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw param_error("fbm_covariance: H must be in (0,1)");
    if (s < 0.0 || t < 0.0) throw param_error("fbm_covariance: times must be nonnegative");
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

FbmSampler::FbmSampler(std::vector<double> times, double hurst, FbmOptions opt)
    : times_(std::move(times)), hurst_(hurst) {
    if (times_.empty() || times_.front() != 0.0)
        throw structural_error("FbmSampler: grid must start at 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw structural_error("FbmSampler: grid must be strictly increasing");
    if (static_cast<int>(times_.size()) > opt.cholesky_cap)
        throw size_error("FbmSampler: grid length " + std::to_string(times_.size()) +
                         " exceeds the Cholesky cap " + std::to_string(opt.cholesky_cap));
    const Eigen::Index m = static_cast<Eigen::Index>(times_.size()) - 1;
    if (m == 0) return;  // path is identically zero
    Eigen::MatrixXd cov(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = fbm_covariance(times_[i + 1], times_[j + 1], hurst_);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    for (Eigen::Index i = 0; i < m; ++i) cov(i, i) += opt.jitter * (1.0 + cov(i, i));
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw numerical_error("FbmSampler: covariance not positive definite after jitter");
    chol_ = llt.matrixL();
}

ScalarPath FbmSampler::draw(RngStream& rng) const {
    const Eigen::Index m = chol_.rows();
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z[i] = rng.gaussian();
    ScalarPath path;
    path.times = times_;
    path.values.assign(times_.size(), 0.0);
    if (m > 0) {
        // lower-triangular matvec
        for (Eigen::Index i = 0; i < m; ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j <= i; ++j) acc += chol_(i, j) * z[j];
            path.values[static_cast<std::size_t>(i) + 1] = acc;
        }
    }
    return path;
}

ScalarPath sample_fbm(const std::vector<double>& times, double hurst, RngStream& rng,
                      FbmOptions opt) {
    return FbmSampler(times, hurst, opt).draw(rng);
}

// ---------------------------------------------------------------------------

void FouParams::validate() const {
    if (!(lambda > 0.0)) throw param_error("FouParams: lambda must be positive");
    if (!(sigma >= 0.0)) throw param_error("FouParams: sigma must be nonnegative");
    if (!(hurst > 0.25 && hurst < 1.0)) throw param_error("FouParams: hurst must be in (1/4, 1)");
}

std::vector<double> refine_grid(const std::vector<double>& grid, int substeps) {
    if (substeps < 1) throw param_error("refine_grid: substeps must be >= 1");
    if (grid.size() < 2) return grid;
    std::vector<double> fine;
    fine.reserve((grid.size() - 1) * substeps + 1);
    fine.push_back(grid.front());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        for (int s = 1; s <= substeps; ++s) fine.push_back(a + (b - a) * s / substeps);
    }
    return fine;
}

namespace {

// exponential one-step recursion against given fBm increments
std::vector<double> ou_recursion(const std::vector<double>& fine_times,
                                 const std::vector<double>& fbm, double rate, double amp,
                                 double x0) {
    std::vector<double> x(fine_times.size());
    x[0] = x0;
    for (std::size_t l = 0; l + 1 < fine_times.size(); ++l) {
        const double h = fine_times[l + 1] - fine_times[l];
        const double db = fbm[l + 1] - fbm[l];
        x[l + 1] = std::exp(-rate * h) * x[l] + amp * std::exp(-rate * h / 2.0) * db;
    }
    return x;
}

}  // namespace

FouSampler::FouSampler(const FouParams& params, std::vector<double> grid, int substeps,
                       FbmOptions opt)
    : params_(params), grid_(std::move(grid)), substeps_(substeps),
      fbm_(refine_grid(grid_, substeps), params.hurst, opt) {
    params_.validate();
    if (!is_uniform(grid_)) throw structural_error("FouSampler: grid must be uniform");
    if (substeps_ < 1) throw param_error("FouSampler: substeps must be >= 1");
}

ScalarPath FouSampler::draw(std::uint64_t seed, std::uint64_t replica) const {
    RngStream rng(seed, stream_id::fbm_mode, replica);
    const ScalarPath b = fbm_.draw(rng);
    const auto x = ou_recursion(fbm_.times(), b.values, params_.lambda, params_.sigma, params_.x0);
    ScalarPath out;
    out.times = grid_;
    out.values.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        out.values[i] = x[i * static_cast<std::size_t>(substeps_)];
    return out;
}

ScalarPath sample_fou(const FouParams& params, const std::vector<double>& grid,
                      std::uint64_t seed, int substeps, FbmOptions opt, std::uint64_t replica) {
    return FouSampler(params, grid, substeps, opt).draw(seed, replica);
}

Eigen::MatrixXd sample_q_fwiener_coeffs(const NoiseSpec& spec, const std::vector<double>& grid,
                                        std::uint64_t seed, std::uint64_t replica,
                                        FbmOptions opt) {
    const Eigen::Index nt = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd coeffs(nt, static_cast<Eigen::Index>(spec.size()));
    if (spec.size() == 0) return coeffs;
    const FbmSampler sampler(grid, spec.hurst(), opt);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& ent = spec.entries()[i];
        RngStream rng(seed, stream_id::fbm_mode + static_cast<std::uint64_t>(ent.mode_id),
                      replica);
        const ScalarPath b = sampler.draw(rng);
        for (Eigen::Index t = 0; t < nt; ++t)
            coeffs(t, static_cast<Eigen::Index>(i)) = ent.sigma * b.values[t];
    }
    return coeffs;
}

FieldPath assemble_field_path(const NoiseSpec& spec, const std::vector<double>& times,
                              const Eigen::MatrixXd& coeffs) {
    FieldPath out;
    out.times = times;
    out.values.reserve(times.size());
    const int n = spec.grid_n() > 0 ? spec.grid_n() : 4;
    for (std::size_t t = 0; t < times.size(); ++t) {
        SpectralField f(n);
        for (std::size_t i = 0; i < spec.size(); ++i)
            axpy(coeffs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)),
                 spec.entries()[i].e, f);
        out.values.push_back(std::move(f));
    }
    return out;
}

FieldPath sample_q_fwiener(const NoiseSpec& spec, const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t replica, FbmOptions opt) {
    const auto coeffs = sample_q_fwiener_coeffs(spec, grid, seed, replica, opt);
    return assemble_field_path(spec, grid, coeffs);
}

FastOuSampler::FastOuSampler(const NoiseSpec& spec, std::vector<double> grid, int substeps,
                             FbmOptions opt)
    : spec_(spec), grid_(std::move(grid)), substeps_(substeps),
      fbm_(refine_grid(grid_, substeps), spec.hurst(), opt) {
    if (!is_uniform(grid_)) throw structural_error("FastOuSampler: grid must be uniform");
    if (substeps_ < 1) throw param_error("FastOuSampler: substeps must be >= 1");
}

FastOuPaths FastOuSampler::draw(double eps, std::uint64_t seed, std::uint64_t replica) const {
    if (!(eps > 0.0 && eps <= 1.0)) throw param_error("FastOuSampler: eps must be in (0,1]");
    FastOuPaths out;
    out.times = grid_;
    const Eigen::Index nt = static_cast<Eigen::Index>(grid_.size());
    const Eigen::Index m = static_cast<Eigen::Index>(spec_.size());
    out.w_coeffs = Eigen::MatrixXd::Zero(nt, m);
    out.wiener_coeffs = Eigen::MatrixXd::Zero(nt, m);
    if (m == 0) return out;

    const auto& fine = fbm_.times();
    const double amp_scale = std::pow(eps, -spec_.hurst());
    for (std::size_t i = 0; i < spec_.size(); ++i) {
        const auto& ent = spec_.entries()[i];
        RngStream rng(seed, stream_id::fbm_mode + static_cast<std::uint64_t>(ent.mode_id),
                      replica);
        const ScalarPath b = fbm_.draw(rng);
        const double rate = std::abs(ent.lambda) / eps;
        const auto w = ou_recursion(fine, b.values, rate, amp_scale * ent.sigma, 0.0);
        for (Eigen::Index t = 0; t < nt; ++t) {
            const std::size_t l = static_cast<std::size_t>(t) * substeps_;
            out.w_coeffs(t, static_cast<Eigen::Index>(i)) = w[l];
            out.wiener_coeffs(t, static_cast<Eigen::Index>(i)) = ent.sigma * b.values[l];
        }
    }
    return out;
}

FastOuPaths sample_fast_ou_paths(const NoiseSpec& spec, double eps,
                                 const std::vector<double>& grid, std::uint64_t seed,
                                 int substeps, std::uint64_t replica, FbmOptions opt) {
    return FastOuSampler(spec, grid, substeps, opt).draw(eps, seed, replica);
}

FieldPath sample_fast_ou_field(const NoiseSpec& spec, double eps, const std::vector<double>& grid,
                               std::uint64_t seed, int substeps, std::uint64_t replica,
                               FbmOptions opt) {
    const auto paths = sample_fast_ou_paths(spec, eps, grid, seed, substeps, replica, opt);
    return assemble_field_path(spec, grid, paths.w_coeffs);
}

}  // namespace sfns
