#include "sfns/fou_ergodics.hpp"

#include <cmath>
#include <functional>

#include "sfns/errors.hpp"

namespace sfns {

namespace {

// adaptive Simpson with absolute tolerance
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) throw numerical_error("adaptive quadrature failed to converge");
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// relative-tolerance driver: the absolute budget scales with a first
// whole-interval estimate so steep integrands (e^{lambda z}) stay tractable
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double scale_floor = 1.0) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = rel_tol * std::max({std::abs(whole), scale_floor});
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// int_0^a e^{c z} z^{2H-1} dz  =  sum_k c^k / k! * a^{2H+k} / (2H+k),
// exact and fast for |c| a <= 1. Handles the integrable endpoint singularity
// analytically (the k = 0 term is a^{2H} / (2H)).
double first_panel_series(double c, double hurst, double a) {
    const double h2 = 2.0 * hurst;
    double term = std::pow(a, h2);  // c^k a^{2H+k} / k!
    double acc = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double contrib = term / (h2 + k);
        acc += contrib;
        if (std::abs(contrib) < 1e-17 * std::abs(acc) + 1e-300) break;
        term *= c * a / (k + 1);
    }
    return acc;
}

// int_0^t e^{c z} z^{2H-1} dz for c <= 0 or moderate positive c*t
double exp_power_integral(double c, double hurst, double t) {
    if (t <= 0.0) return 0.0;
    const double a = std::min(t, std::abs(c) > 0.0 ? 0.5 / std::abs(c) : t);
    double acc = first_panel_series(c, hurst, a);
    if (a < t) {
        const double h2m1 = 2.0 * hurst - 1.0;
        auto f = [&](double z) { return std::exp(c * z) * std::pow(z, h2m1); };
        acc += integrate(f, a, t, 1e-12, std::abs(acc));
    }
    return acc;
}

// int_0^t e^{-lambda (t-z)} z^{2H-1} dz. For large lambda*t the weight
// confines the mass to a neighborhood of z = t where the integrand is smooth.
double reversed_exp_power_integral(double lambda, double hurst, double t) {
    if (t <= 0.0) return 0.0;
    if (lambda * t <= 300.0)
        return std::exp(-lambda * t) * exp_power_integral(lambda, hurst, t);
    const double lower = t - 40.0 / lambda;  // truncation error < e^{-40} relative
    const double h2m1 = 2.0 * hurst - 1.0;
    auto f = [&](double z) { return std::exp(-lambda * (t - z)) * std::pow(z, h2m1); };
    return integrate(f, lower, t, 1e-12);
}

}  // namespace

double singular_exp_integral(double lambda, double hurst, double t) {
    return exp_power_integral(-lambda, hurst, t);
}

double fou_second_moment(const FouParams& params, double t) {
    params.validate();
    if (t < 0.0) throw param_error("fou_second_moment: t must be nonnegative");
    const double decay = std::exp(-2.0 * params.lambda * t) * params.x0 * params.x0;
    if (t == 0.0 || params.sigma == 0.0) return decay;
    // I1 = int_0^t e^{-lambda z} z^{2H-1} dz
    const double i1 = exp_power_integral(-params.lambda, params.hurst, t);
    // I2 = int_0^t e^{-lambda (t-z)} z^{2H-1} dz
    const double i2 = reversed_exp_power_integral(params.lambda, params.hurst, t);
    return decay + params.sigma * params.sigma * params.hurst *
                       (i1 + std::exp(-params.lambda * t) * i2);
}

double limit_variance(const FouParams& params) {
    params.validate();
    return params.sigma * params.sigma * std::tgamma(2.0 * params.hurst + 1.0) /
           (2.0 * std::pow(params.lambda, 2.0 * params.hurst));
}

double mean_convergence_gap(const FouParams& params, double t) {
    return std::abs(fou_second_moment(params, t) - limit_variance(params));
}

double time_average_quadratic(const ScalarPath& path) {
    path.validate();
    if (path.times.size() < 2)
        throw structural_error("time_average_quadratic: need at least two samples");
    if (!is_uniform(path.times))
        throw structural_error("time_average_quadratic: grid must be uniform");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        const double h = path.times[i + 1] - path.times[i];
        acc += 0.5 * h *
               (path.values[i] * path.values[i] + path.values[i + 1] * path.values[i + 1]);
    }
    return acc / path.times.back();
}

}  // namespace sfns
