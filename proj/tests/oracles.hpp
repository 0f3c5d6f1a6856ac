#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (direct convolutions, dense quadrature, exhaustive
// enumeration) so they share no code path with the library.

#include <complex>
#include <functional>
#include <vector>

#include "sfns/spectral.hpp"

namespace oracle {

inline int wavenum(int a, int n) { return a <= n / 2 ? a : a - n; }

// Pi (u . grad) v by direct spectral convolution:
//   (u.grad v)_hat(k) = sum_{p+q=k} i (u_hat(p) . q) v_hat(q)
// O(n^4), no dealiasing, exact for band-limited inputs whose product fits in
// the lattice.
inline sfns::SpectralField convection_direct(const sfns::SpectralField& u,
                                             const sfns::SpectralField& v) {
    const int n = u.n();
    const int half = n / 2;
    sfns::SpectralField raw(n);
    for (int c = 0; c < 2; ++c) {
        for (int kx = -half + 1; kx < half; ++kx)
            for (int ky = -half + 1; ky < half; ++ky) {
                std::complex<double> acc(0.0, 0.0);
                for (int px = -half + 1; px < half; ++px)
                    for (int py = -half + 1; py < half; ++py) {
                        const int qx = kx - px;
                        const int qy = ky - py;
                        if (qx <= -half || qx >= half || qy <= -half || qy >= half) continue;
                        const std::complex<double> udotq =
                            u.coef(0, px, py) * double(qx) + u.coef(1, px, py) * double(qy);
                        acc += std::complex<double>(0.0, 1.0) * udotq * v.coef(c, qx, qy);
                    }
                raw.coef(c, kx, ky) = acc;
            }
    }
    return sfns::leray_project(raw);
}

// Composite Simpson on a smooth callable.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / (2.0 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

// p-variation by exhaustive enumeration over all sub-partitions of the grid.
// Exponential in the number of points; fine up to ~14.
inline double p_variation_bruteforce(const std::vector<std::vector<double>>& points, double p) {
    const int n = static_cast<int>(points.size());
    auto incr_norm = [&](int i, int j) {
        double acc = 0.0;
        for (std::size_t d = 0; d < points[i].size(); ++d) {
            const double diff = points[j][d] - points[i][d];
            acc += diff * diff;
        }
        return std::sqrt(acc);
    };
    double best = 0.0;
    const int interior = n - 2;
    for (long mask = 0; mask < (1L << interior); ++mask) {
        double sum = 0.0;
        int prev = 0;
        for (int i = 1; i < n - 1; ++i) {
            if (mask & (1L << (i - 1))) {
                sum += std::pow(incr_norm(prev, i), p);
                prev = i;
            }
        }
        sum += std::pow(incr_norm(prev, n - 1), p);
        best = std::max(best, sum);
    }
    return std::pow(best, 1.0 / p);
}

}  // namespace oracle
