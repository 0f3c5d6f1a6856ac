#include "sfns/drift.hpp"

#include <cmath>
#include <vector>

#include "sfns/errors.hpp"
#include "sfns/fou_ergodics.hpp"
#include "sfns/rng.hpp"

namespace sfns {

double stationary_mode_variance(const NoiseEntry& entry, double hurst) {
    FouParams p;
    p.lambda = std::abs(entry.lambda);
    p.sigma = entry.sigma;
    p.hurst = hurst;
    return limit_variance(p);
}

namespace {

// pairwise interaction table: B[i][j] = b(e_i, e_j), its basis coefficients
// beta[i][j] = <B[i][j], e_k>_k and the out-of-span residual fields
struct InteractionTable {
    std::vector<std::vector<SpectralField>> fields;
    std::vector<std::vector<Eigen::VectorXd>> beta;
    std::vector<std::vector<SpectralField>> residual;
};

InteractionTable build_interactions(const NoiseSpec& spec) {
    const std::size_t m = spec.size();
    InteractionTable tab;
    tab.fields.resize(m);
    tab.beta.resize(m);
    tab.residual.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        tab.fields[i].resize(m);
        tab.beta[i].resize(m);
        tab.residual[i].resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            SpectralField bij = convection(spec.entries()[i].e, spec.entries()[j].e);
            Eigen::VectorXd beta = spec.project(bij);
            SpectralField res = bij;
            for (std::size_t k = 0; k < m; ++k)
                axpy(-beta[static_cast<Eigen::Index>(k)], spec.entries()[k].e, res);
            tab.fields[i][j] = std::move(bij);
            tab.beta[i][j] = std::move(beta);
            tab.residual[i][j] = std::move(res);
        }
    }
    return tab;
}

// assemble a DriftResult from second-moment weights q(i,j) ~ E[g_i g_j]
DriftResult from_moment_matrix(const NoiseSpec& spec, const InteractionTable& tab,
                               const Eigen::MatrixXd& q, const std::string& method) {
    const std::size_t m = spec.size();
    DriftResult out;
    out.method = method;
    out.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    out.coeff_stderr = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    if (m == 0) {
        out.field = SpectralField();
        return out;
    }
    SpectralField unresolved(spec.grid_n());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double w = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < m; ++k)
                out.coeffs[static_cast<Eigen::Index>(k)] +=
                    w * tab.beta[i][j][static_cast<Eigen::Index>(k)] /
                    std::abs(spec.entries()[k].lambda);
            axpy(w, tab.residual[i][j], unresolved);
        }
    out.field = spec.assemble(out.coeffs);
    out.unresolved_mass = l2_norm(unresolved);
    return out;
}

}  // namespace

DriftResult ito_stokes_drift_spectral(const NoiseSpec& spec) {
    const std::size_t m = spec.size();
    const InteractionTable tab = build_interactions(spec);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            stationary_mode_variance(spec.entries()[i], spec.hurst());
    DriftResult out = from_moment_matrix(spec, tab, q, "spectral");
    return out;
}

DriftResult ito_stokes_drift_mc(const NoiseSpec& spec, int samples, std::uint64_t seed) {
    if (samples < 1) throw param_error("ito_stokes_drift_mc: samples must be >= 1");
    const std::size_t m = spec.size();
    const InteractionTable tab = build_interactions(spec);

    std::vector<double> sdev(m);
    for (std::size_t i = 0; i < m; ++i)
        sdev[i] = std::sqrt(stationary_mode_variance(spec.entries()[i], spec.hurst()));

    // per-sample coefficients c_k = sum_{ij} g_i g_j <b(e_i,e_j), e_k>/|lambda_k|
    // accumulated via Welford; the second-moment matrix drives the residual.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    Eigen::VectorXd msq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    Eigen::MatrixXd q_mean =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd g(static_cast<Eigen::Index>(m));
    Eigen::VectorXd c(static_cast<Eigen::Index>(m));
    for (int s = 0; s < samples; ++s) {
        RngStream rng(seed, stream_id::drift_mc, static_cast<std::uint64_t>(s));
        for (std::size_t i = 0; i < m; ++i)
            g[static_cast<Eigen::Index>(i)] = sdev[i] * rng.gaussian();
        c.setZero();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double w =
                    g[static_cast<Eigen::Index>(i)] * g[static_cast<Eigen::Index>(j)];
                q_mean(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    (w - q_mean(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) /
                    (s + 1);
                for (std::size_t k = 0; k < m; ++k)
                    c[static_cast<Eigen::Index>(k)] +=
                        w * tab.beta[i][j][static_cast<Eigen::Index>(k)] /
                        std::abs(spec.entries()[k].lambda);
            }
        const Eigen::VectorXd delta = c - mean;
        mean += delta / (s + 1);
        msq += delta.cwiseProduct(c - mean);
    }

    DriftResult out = from_moment_matrix(spec, tab, q_mean, "monte_carlo");
    out.coeffs = mean;
    if (m > 0) out.field = spec.assemble(mean);
    if (samples > 1)
        out.coeff_stderr = (msq / (double(samples) * (samples - 1))).cwiseSqrt();
    out.error_estimate = out.coeff_stderr.norm();
    return out;
}

DriftResult ito_stokes_drift_ergodic(const NoiseSpec& spec, double T, double dt,
                                     std::uint64_t seed, int substeps, int batches) {
    if (!(T > 0.0) || !(dt > 0.0)) throw param_error("ito_stokes_drift_ergodic: need T, dt > 0");
    const int steps = static_cast<int>(std::llround(T / dt));
    if (steps < 2) throw param_error("ito_stokes_drift_ergodic: horizon too short for dt");
    const auto grid = uniform_grid(T, steps);

    const std::size_t m = spec.size();
    const InteractionTable tab = build_interactions(spec);
    const FastOuPaths paths = sample_fast_ou_paths(spec, 1.0, grid, seed, substeps);

    // trapezoid weights for (1/T) int w_i w_j dt
    Eigen::MatrixXd q =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (int t = 0; t <= steps; ++t) {
        const double w = (t == 0 || t == steps) ? 0.5 * dt : dt;
        q += w * paths.w_coeffs.row(t).transpose() * paths.w_coeffs.row(t);
    }
    q /= T;
    DriftResult out = from_moment_matrix(spec, tab, q, "ergodic");

    // batch means for the standard error of each coefficient
    if (batches > 1 && m > 0 && steps >= batches) {
        Eigen::MatrixXd batch_coeffs(batches, static_cast<Eigen::Index>(m));
        const int per = steps / batches;
        for (int bidx = 0; bidx < batches; ++bidx) {
            Eigen::MatrixXd qb = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                       static_cast<Eigen::Index>(m));
            const int lo = bidx * per;
            const int hi = (bidx + 1 == batches) ? steps : (bidx + 1) * per;
            for (int t = lo; t <= hi; ++t) {
                const double w = (t == lo || t == hi) ? 0.5 * dt : dt;
                qb += w * paths.w_coeffs.row(t).transpose() * paths.w_coeffs.row(t);
            }
            qb /= (grid[hi] - grid[lo]);
            const DriftResult db = from_moment_matrix(spec, tab, qb, "batch");
            batch_coeffs.row(bidx) = db.coeffs.transpose();
        }
        const Eigen::RowVectorXd bm = batch_coeffs.colwise().mean();
        Eigen::VectorXd var = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        for (int bidx = 0; bidx < batches; ++bidx) {
            const Eigen::RowVectorXd d = batch_coeffs.row(bidx) - bm;
            var += d.transpose().cwiseProduct(d.transpose());
        }
        var /= double(batches - 1) * batches;
        out.coeff_stderr = var.cwiseSqrt();
        out.error_estimate = out.coeff_stderr.norm();
    }
    return out;
}

double drift_distance(const DriftResult& a, const DriftResult& b) {
    if (a.field.empty() && b.field.empty()) return 0.0;
    if (a.field.empty()) return l2_norm(b.field);
    if (b.field.empty()) return l2_norm(a.field);
    return l2_norm(a.field - b.field);
}

}  // namespace sfns
