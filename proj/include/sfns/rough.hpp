#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "sfns/noise.hpp"
#include "sfns/paths.hpp"
#include "sfns/spectral.hpp"

namespace sfns {

// Canonical two-level lift of a piecewise-smooth path in noise-mode
// coordinates. Level 1 stores cumulative coefficient values (rows of
// `level1`); level 2 stores one tensor per adjacent grid interval,
//   L2[j] = int_{t_j}^{t_{j+1}} (y_r - y_{t_j}) (x) dy_r,
// and reconstructs arbitrary (s,t) through prefix sums and the Chen
// identity, keeping memory O(n m^2). Chen's relation therefore holds to
// round-off by construction; tests can inject a dense override to probe the
// defect diagnostics.
class RoughLift {
public:
    RoughLift() = default;
    RoughLift(std::vector<double> times, Eigen::MatrixXd level1,
              std::vector<Eigen::MatrixXd> level2_adjacent, double p);

    const std::vector<double>& times() const { return times_; }
    const Eigen::MatrixXd& level1() const { return level1_; }
    double p() const { return p_; }
    int modes() const { return static_cast<int>(level1_.cols()); }
    int points() const { return static_cast<int>(level1_.rows()); }

    Eigen::VectorXd level1_increment(int i, int j) const;
    Eigen::MatrixXd level2(int i, int j) const;

    int index_of(double t) const;  // exact grid lookup; throws on non-grid time

    // test hook: replace Y^2(i,j) for one pair
    void override_level2(int i, int j, Eigen::MatrixXd value);

private:
    std::vector<double> times_;
    Eigen::MatrixXd level1_;                  // n x m cumulative values
    std::vector<Eigen::MatrixXd> level2_adj_; // n-1 adjacent tensors
    std::vector<Eigen::MatrixXd> prefix_;     // Y^2(t_0, t_i)
    std::map<std::pair<int, int>, Eigen::MatrixXd> overrides_;
    double p_ = 2.0;
};

// y_t = eps^{-alpha+H} int_0^t w_r dr, cumulative trapezoid.
FieldPath build_y_path(const FieldPath& w, double eps, double alpha, double hurst);
Eigen::MatrixXd build_y_coeffs(const Eigen::MatrixXd& w_coeffs, const std::vector<double>& times,
                               double eps, double alpha, double hurst);

// Canonical lift of the sampled path: exact for the piecewise-linear
// interpolant (level 2 per interval is (1/2) dy (x) dy).
RoughLift lift_canonical(const std::vector<double>& times, const Eigen::MatrixXd& coeffs,
                         double p);
RoughLift lift_canonical(const FieldPath& y, const NoiseSpec& spec, double p);

// Chen defect ||Y2(s,t) - Y2(s,u) - Y2(u,t) - Y1(s,u) (x) Y1(u,t)||_F at grid
// times s <= u <= t.
double chen_defect(const RoughLift& lift, double s, double u, double t);

// p-variation caps
struct VariationOptions {
    int point_cap = 4000;
};

// Exact p-variation over grid points by O(n^2) dynamic programming.
double p_variation(const std::vector<Eigen::VectorXd>& values, double p,
                   VariationOptions opt = {});
double p_variation(const ScalarPath& path, double p, VariationOptions opt = {});

// 2-index variant: `increment_norm(i, j)` must return the norm of the
// two-parameter object over (t_i, t_j).
double p_variation_2index(int n, const std::function<double(int, int)>& increment_norm, double p,
                          VariationOptions opt = {});

// default variation exponent: 1/H + 0.05 clamped to (1/H, 3)
double default_p(double hurst);
// driver depth: 1 for p < 2, else 2
int rough_level_count(double p);

// Unbounded-driver actions on a test field:
//   level 1:  b( sum_i Y1_{s,t}(i) e_i , phi )
//   level 2:  sum_{ij} Y2_{s,t}(i,j) b(e_j, b(e_i, phi))
SpectralField urd_apply_1(const RoughLift& lift, double s, double t, const SpectralField& phi,
                          const NoiseSpec& spec);
SpectralField urd_apply_2(const RoughLift& lift, double s, double t, const SpectralField& phi,
                          const NoiseSpec& spec);

// (level-1 p-variation, level-2 p/2-variation) of the difference of two lifts
// on a common grid.
std::pair<double, double> lift_distance(const RoughLift& a, const RoughLift& b,
                                        VariationOptions opt = {});

// ||Y1||_{p-var} and ||Y2||_{p/2-var} of a single lift.
std::pair<double, double> lift_variation_norms(const RoughLift& lift, VariationOptions opt = {});

}  // namespace sfns
