#include "sfns/rough.hpp"

#include <algorithm>
#include <cmath>

#include "sfns/errors.hpp"

namespace sfns {

RoughLift::RoughLift(std::vector<double> times, Eigen::MatrixXd level1,
                     std::vector<Eigen::MatrixXd> level2_adjacent, double p)
    : times_(std::move(times)), level1_(std::move(level1)),
      level2_adj_(std::move(level2_adjacent)), p_(p) {
    const int n = static_cast<int>(times_.size());
    if (n < 2) throw structural_error("RoughLift: need at least two grid points");
    if (level1_.rows() != n) throw structural_error("RoughLift: level1 row count mismatch");
    if (static_cast<int>(level2_adj_.size()) != n - 1)
        throw structural_error("RoughLift: adjacent level2 count mismatch");
    if (!(p_ >= 1.0)) throw param_error("RoughLift: p must be >= 1");
    const int m = modes();
    prefix_.resize(n);
    prefix_[0] = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j + 1 < n; ++j) {
        const Eigen::VectorXd from_start = (level1_.row(j) - level1_.row(0)).transpose();
        const Eigen::VectorXd step = (level1_.row(j + 1) - level1_.row(j)).transpose();
        prefix_[j + 1] = prefix_[j] + level2_adj_[j] + from_start * step.transpose();
    }
}

Eigen::VectorXd RoughLift::level1_increment(int i, int j) const {
    return (level1_.row(j) - level1_.row(i)).transpose();
}

Eigen::MatrixXd RoughLift::level2(int i, int j) const {
    if (!overrides_.empty()) {
        auto it = overrides_.find({i, j});
        if (it != overrides_.end()) return it->second;
    }
    const Eigen::VectorXd head = (level1_.row(i) - level1_.row(0)).transpose();
    const Eigen::VectorXd incr = (level1_.row(j) - level1_.row(i)).transpose();
    return prefix_[j] - prefix_[i] - head * incr.transpose();
}

int RoughLift::index_of(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t - 1e-12);
    if (it == times_.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw structural_error("RoughLift: time is not a grid point");
    return static_cast<int>(it - times_.begin());
}

void RoughLift::override_level2(int i, int j, Eigen::MatrixXd value) {
    overrides_[{i, j}] = std::move(value);
}

FieldPath build_y_path(const FieldPath& w, double eps, double alpha, double hurst) {
    w.validate();
    if (!is_uniform(w.times)) throw structural_error("build_y_path: grid must be uniform");
    const double scale = std::pow(eps, -alpha + hurst);
    FieldPath y;
    y.times = w.times;
    y.values.reserve(w.values.size());
    SpectralField acc(w.values.front().n());
    y.values.push_back(acc);
    for (std::size_t i = 0; i + 1 < w.times.size(); ++i) {
        const double h = w.times[i + 1] - w.times[i];
        axpy(0.5 * h * scale, w.values[i], acc);
        axpy(0.5 * h * scale, w.values[i + 1], acc);
        y.values.push_back(acc);
    }
    return y;
}

Eigen::MatrixXd build_y_coeffs(const Eigen::MatrixXd& w_coeffs, const std::vector<double>& times,
                               double eps, double alpha, double hurst) {
    if (w_coeffs.rows() != static_cast<Eigen::Index>(times.size()))
        throw structural_error("build_y_coeffs: times/coefficient length mismatch");
    const double scale = std::pow(eps, -alpha + hurst);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(w_coeffs.rows(), w_coeffs.cols());
    for (Eigen::Index i = 0; i + 1 < w_coeffs.rows(); ++i) {
        const double h = times[i + 1] - times[i];
        y.row(i + 1) = y.row(i) + 0.5 * h * scale * (w_coeffs.row(i) + w_coeffs.row(i + 1));
    }
    return y;
}

RoughLift lift_canonical(const std::vector<double>& times, const Eigen::MatrixXd& coeffs,
                         double p) {
    if (times.size() < 2) throw structural_error("lift_canonical: need at least two grid points");
    if (coeffs.rows() != static_cast<Eigen::Index>(times.size()))
        throw structural_error("lift_canonical: times/coefficient length mismatch");
    const int n = static_cast<int>(times.size());
    std::vector<Eigen::MatrixXd> adj;
    adj.reserve(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        const Eigen::VectorXd step = (coeffs.row(j + 1) - coeffs.row(j)).transpose();
        adj.push_back(0.5 * step * step.transpose());
    }
    return RoughLift(times, coeffs, std::move(adj), p);
}

RoughLift lift_canonical(const FieldPath& y, const NoiseSpec& spec, double p) {
    y.validate();
    Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(y.times.size()),
                           static_cast<Eigen::Index>(spec.size()));
    for (std::size_t t = 0; t < y.times.size(); ++t)
        coeffs.row(static_cast<Eigen::Index>(t)) = spec.project(y.values[t]).transpose();
    return lift_canonical(y.times, coeffs, p);
}

double chen_defect(const RoughLift& lift, double s, double u, double t) {
    const int i = lift.index_of(s);
    const int k = lift.index_of(u);
    const int j = lift.index_of(t);
    if (!(i <= k && k <= j)) throw param_error("chen_defect: need s <= u <= t");
    const Eigen::MatrixXd lhs = lift.level2(i, j) - lift.level2(i, k) - lift.level2(k, j) -
                                lift.level1_increment(i, k) *
                                    lift.level1_increment(k, j).transpose();
    return lhs.norm();
}

double p_variation(const std::vector<Eigen::VectorXd>& values, double p, VariationOptions opt) {
    const int n = static_cast<int>(values.size());
    if (!(p >= 1.0)) throw param_error("p_variation: p must be >= 1");
    if (n > opt.point_cap)
        throw size_error("p_variation: " + std::to_string(n) + " points exceed cap " +
                         std::to_string(opt.point_cap));
    if (n < 2) return 0.0;
    std::vector<double> best(n, 0.0);
    for (int j = 1; j < n; ++j) {
        double v = 0.0;
        for (int i = 0; i < j; ++i)
            v = std::max(v, best[i] + std::pow((values[j] - values[i]).norm(), p));
        best[j] = v;
    }
    return std::pow(best[n - 1], 1.0 / p);
}

double p_variation(const ScalarPath& path, double p, VariationOptions opt) {
    std::vector<Eigen::VectorXd> pts(path.values.size());
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        Eigen::VectorXd v(1);
        v[0] = path.values[i];
        pts[i] = v;
    }
    return p_variation(pts, p, opt);
}

double p_variation_2index(int n, const std::function<double(int, int)>& increment_norm, double p,
                          VariationOptions opt) {
    if (!(p > 0.0)) throw param_error("p_variation_2index: p must be positive");
    if (n > opt.point_cap)
        throw size_error("p_variation_2index: " + std::to_string(n) + " points exceed cap " +
                         std::to_string(opt.point_cap));
    if (n < 2) return 0.0;
    std::vector<double> best(n, 0.0);
    for (int j = 1; j < n; ++j) {
        double v = 0.0;
        for (int i = 0; i < j; ++i)
            v = std::max(v, best[i] + std::pow(increment_norm(i, j), p));
        best[j] = v;
    }
    return std::pow(best[n - 1], 1.0 / p);
}

double default_p(double hurst) {
    const double lo = 1.0 / hurst;
    double p = lo + 0.05;
    if (p >= 3.0) p = 0.5 * (lo + 3.0);
    return p;
}

int rough_level_count(double p) { return p < 2.0 ? 1 : 2; }

SpectralField urd_apply_1(const RoughLift& lift, double s, double t, const SpectralField& phi,
                          const NoiseSpec& spec) {
    if (static_cast<int>(spec.size()) != lift.modes())
        throw structural_error("urd_apply_1: lift/spec mode count mismatch");
    const Eigen::VectorXd incr = lift.level1_increment(lift.index_of(s), lift.index_of(t));
    if (spec.size() == 0) return SpectralField(phi.n());
    SpectralField field(spec.grid_n());
    for (std::size_t i = 0; i < spec.size(); ++i)
        axpy(incr[static_cast<Eigen::Index>(i)], spec.entries()[i].e, field);
    return convection(field, phi);
}

SpectralField urd_apply_2(const RoughLift& lift, double s, double t, const SpectralField& phi,
                          const NoiseSpec& spec) {
    if (static_cast<int>(spec.size()) != lift.modes())
        throw structural_error("urd_apply_2: lift/spec mode count mismatch");
    if (spec.size() == 0) return SpectralField(phi.n());
    const Eigen::MatrixXd tensor = lift.level2(lift.index_of(s), lift.index_of(t));
    const std::size_t m = spec.size();
    // sum_{ij} Y2(i,j) b(e_j, b(e_i, phi)) contracted as
    // sum_j b(e_j, sum_i Y2(i,j) b(e_i, phi))
    std::vector<SpectralField> inner(m);
    for (std::size_t i = 0; i < m; ++i) inner[i] = convection(spec.entries()[i].e, phi);
    SpectralField out(phi.n());
    for (std::size_t j = 0; j < m; ++j) {
        SpectralField mix(phi.n());
        bool any = false;
        for (std::size_t i = 0; i < m; ++i) {
            const double w =
                tensor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (w != 0.0) {
                axpy(w, inner[i], mix);
                any = true;
            }
        }
        if (any) out += convection(spec.entries()[j].e, mix);
    }
    return out;
}

namespace {

void check_compatible(const RoughLift& a, const RoughLift& b) {
    if (a.points() != b.points() || a.modes() != b.modes())
        throw structural_error("lift_distance: grid/mode mismatch");
    for (int i = 0; i < a.points(); ++i)
        if (std::abs(a.times()[i] - b.times()[i]) > 1e-12)
            throw structural_error("lift_distance: time grids differ");
    if (std::abs(a.p() - b.p()) > 1e-12)
        throw structural_error("lift_distance: variation exponents differ");
}

}  // namespace

std::pair<double, double> lift_distance(const RoughLift& a, const RoughLift& b,
                                        VariationOptions opt) {
    check_compatible(a, b);
    const int n = a.points();
    std::vector<Eigen::VectorXd> diff(n);
    for (int i = 0; i < n; ++i)
        diff[i] = (a.level1().row(i) - b.level1().row(i)).transpose();
    const double d1 = p_variation(diff, a.p(), opt);
    const double d2 = p_variation_2index(
        n, [&](int i, int j) { return (a.level2(i, j) - b.level2(i, j)).norm(); }, a.p() / 2.0,
        opt);
    return {d1, d2};
}

std::pair<double, double> lift_variation_norms(const RoughLift& lift, VariationOptions opt) {
    const int n = lift.points();
    std::vector<Eigen::VectorXd> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = lift.level1().row(i).transpose();
    const double v1 = p_variation(pts, lift.p(), opt);
    const double v2 = p_variation_2index(
        n, [&](int i, int j) { return lift.level2(i, j).norm(); }, lift.p() / 2.0, opt);
    return {v1, v2};
}

}  // namespace sfns
