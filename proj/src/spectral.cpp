#include "sfns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "sfns/errors.hpp"

namespace sfns {

namespace {

// FFTW plan cache. Plan creation is not thread-safe; execution on distinct
// buffers is. new-array execution keeps the cached plans buffer-independent.
class FftPlans {
public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void forward(int n, std::complex<double>* inout) { run(n, FFTW_FORWARD, inout); }
    void backward(int n, std::complex<double>* inout) { run(n, FFTW_BACKWARD, inout); }

private:
    void run(int n, int sign, std::complex<double>* inout) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
                auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
                plan = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        auto* buf = reinterpret_cast<fftw_complex*>(inout);
        fftw_execute_dft(plan, buf, buf);
    }

    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

int wavenumber(int a, int n) { return a <= n / 2 ? a : a - n; }

void check_even(int n) {
    if (n < 4 || n % 2 != 0) throw param_error("grid resolution must be even and >= 4");
}

void check_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
    if (a.n() != b.n()) throw structural_error(std::string(what) + ": grid mismatch");
}

// zero every coefficient with |kx| or |ky| above the cutoff
void truncate_modes(SpectralField& u, int cutoff) {
    const int n = u.n();
    for (int c = 0; c < 2; ++c) {
        auto* block = u.comp(c);
        for (int ay = 0; ay < n; ++ay) {
            const int ky = wavenumber(ay, n);
            for (int ax = 0; ax < n; ++ax) {
                const int kx = wavenumber(ax, n);
                if (std::abs(kx) > cutoff || std::abs(ky) > cutoff)
                    block[static_cast<std::size_t>(ay) * n + ax] = 0.0;
            }
        }
    }
}

}  // namespace

SpectralField::SpectralField(int n) : n_(n) {
    check_even(n);
    a_.assign(static_cast<std::size_t>(2) * n * n, std::complex<double>(0.0, 0.0));
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_same_grid(*this, o, "operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_same_grid(*this, o, "operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : a_) v *= s;
    return *this;
}

void SpectralField::set_zero() { std::fill(a_.begin(), a_.end(), std::complex<double>(0.0, 0.0)); }

void axpy(double s, const SpectralField& x, SpectralField& y) {
    check_same_grid(x, y, "axpy");
    const auto* xs = x.data();
    auto* ys = y.data();
    for (std::size_t i = 0; i < x.size(); ++i) ys[i] += s * xs[i];
}

int dealias_cutoff(int n) { return n / 3; }

SpectralField leray_project(const SpectralField& f) {
    const int n = f.n();
    SpectralField out = f;
    const int half = n / 2;
    for (int ay = 0; ay < n; ++ay) {
        const int ky = wavenumber(ay, n);
        for (int ax = 0; ax < n; ++ax) {
            const int kx = wavenumber(ax, n);
            auto& ux = out.coef(0, kx, ky);
            auto& uy = out.coef(1, kx, ky);
            if ((kx == 0 && ky == 0) || std::abs(kx) == half || std::abs(ky) == half) {
                ux = 0.0;
                uy = 0.0;
                continue;
            }
            const double k2 = double(kx) * kx + double(ky) * ky;
            const std::complex<double> kdotu = double(kx) * ux + double(ky) * uy;
            ux -= double(kx) * kdotu / k2;
            uy -= double(ky) * kdotu / k2;
        }
    }
    return out;
}

SpectralField leray_project_raw(int n, int ncomp, const std::vector<std::complex<double>>& coeffs) {
    if (ncomp != 2)
        throw structural_error("leray_project: expected 2 components, got " + std::to_string(ncomp));
    if (coeffs.size() != static_cast<std::size_t>(2) * n * n)
        throw structural_error("leray_project: coefficient buffer size does not match grid");
    SpectralField f(n);
    std::copy(coeffs.begin(), coeffs.end(), f.data());
    return leray_project(f);
}

SpectralField stokes_apply(const SpectralField& u) {
    const int n = u.n();
    SpectralField out = u;
    for (int c = 0; c < 2; ++c) {
        auto* block = out.comp(c);
        for (int ay = 0; ay < n; ++ay) {
            const int ky = wavenumber(ay, n);
            for (int ax = 0; ax < n; ++ax) {
                const int kx = wavenumber(ax, n);
                block[static_cast<std::size_t>(ay) * n + ax] *= -(double(kx) * kx + double(ky) * ky);
            }
        }
    }
    return out;
}

void heat_multiply(SpectralField& u, double nu_s) {
    const int n = u.n();
    for (int c = 0; c < 2; ++c) {
        auto* block = u.comp(c);
        for (int ay = 0; ay < n; ++ay) {
            const int ky = wavenumber(ay, n);
            for (int ax = 0; ax < n; ++ax) {
                const int kx = wavenumber(ax, n);
                const double k2 = double(kx) * kx + double(ky) * ky;
                block[static_cast<std::size_t>(ay) * n + ax] *= std::exp(-nu_s * k2);
            }
        }
    }
}

namespace {

// inverse transform of one scalar spectral block to physical values
std::vector<std::complex<double>> to_phys_complex(int n, const std::complex<double>* spec) {
    std::vector<std::complex<double>> buf(spec, spec + static_cast<std::size_t>(n) * n);
    FftPlans::instance().backward(n, buf.data());
    return buf;
}

// forward transform with the 1/n^2 normalization
void to_spec(int n, std::vector<std::complex<double>>& buf) {
    FftPlans::instance().forward(n, buf.data());
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& v : buf) v *= scale;
}

// spectral derivative d/dx_j
std::vector<std::complex<double>> derivative(const SpectralField& v, int comp, int j) {
    const int n = v.n();
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * n);
    const auto* block = v.comp(comp);
    for (int ay = 0; ay < n; ++ay) {
        const int ky = wavenumber(ay, n);
        for (int ax = 0; ax < n; ++ax) {
            const int kx = wavenumber(ax, n);
            const double kj = j == 0 ? kx : ky;
            out[static_cast<std::size_t>(ay) * n + ax] =
                std::complex<double>(0.0, kj) * block[static_cast<std::size_t>(ay) * n + ax];
        }
    }
    return out;
}

}  // namespace

SpectralField convection(const SpectralField& u, const SpectralField& v) {
    check_same_grid(u, v, "convection");
    const int n = u.n();
    const int K = dealias_cutoff(n);

    SpectralField ut = u;
    SpectralField vt = v;
    truncate_modes(ut, K);
    truncate_modes(vt, K);

    // physical samples of u and grad v
    auto ux = to_phys_complex(n, ut.comp(0));
    auto uy = to_phys_complex(n, ut.comp(1));
    std::array<std::vector<std::complex<double>>, 4> dv;
    for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 2; ++j) {
            auto d = derivative(vt, c, j);
            FftPlans::instance().backward(n, d.data());
            dv[static_cast<std::size_t>(c) * 2 + j] = std::move(d);
        }

    SpectralField out(n);
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    for (int c = 0; c < 2; ++c) {
        std::vector<std::complex<double>> prod(sz);
        const auto& dvdx = dv[static_cast<std::size_t>(c) * 2 + 0];
        const auto& dvdy = dv[static_cast<std::size_t>(c) * 2 + 1];
        for (std::size_t i = 0; i < sz; ++i)
            prod[i] = ux[i].real() * dvdx[i].real() + uy[i].real() * dvdy[i].real();
        to_spec(n, prod);
        std::copy(prod.begin(), prod.end(), out.comp(c));
    }
    truncate_modes(out, K);
    return leray_project(out);
}

SpectralField convection2(const SpectralField& f1, const SpectralField& f2,
                          const SpectralField& phi) {
    return convection(f2, convection(f1, phi));
}

double sobolev_norm(const SpectralField& u, double s) {
    const int n = u.n();
    double acc = 0.0;
    for (int c = 0; c < 2; ++c) {
        const auto* block = u.comp(c);
        for (int ay = 0; ay < n; ++ay) {
            const int ky = wavenumber(ay, n);
            for (int ax = 0; ax < n; ++ax) {
                const int kx = wavenumber(ax, n);
                if (kx == 0 && ky == 0) continue;
                const double k2 = double(kx) * kx + double(ky) * ky;
                acc += std::pow(k2, s) * std::norm(block[static_cast<std::size_t>(ay) * n + ax]);
            }
        }
    }
    return std::sqrt(acc);
}

double l2_norm(const SpectralField& u) { return sobolev_norm(u, 0.0); }

double inner_product(const SpectralField& u, const SpectralField& v) {
    check_same_grid(u, v, "inner_product");
    double acc = 0.0;
    const auto* us = u.data();
    const auto* vs = v.data();
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += us[i].real() * vs[i].real() + us[i].imag() * vs[i].imag();
    return acc;
}

double divergence_defect(const SpectralField& u) {
    const int n = u.n();
    double worst = 0.0;
    for (int ay = 0; ay < n; ++ay) {
        const int ky = wavenumber(ay, n);
        for (int ax = 0; ax < n; ++ax) {
            const int kx = wavenumber(ax, n);
            const auto div = double(kx) * u.coef(0, kx, ky) + double(ky) * u.coef(1, kx, ky);
            worst = std::max(worst, std::abs(div));
        }
    }
    const double nrm = l2_norm(u);
    return nrm > 0.0 ? worst / nrm : worst;
}

double conjugate_symmetry_defect(const SpectralField& u) {
    const int n = u.n();
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int ay = 0; ay < n; ++ay) {
            const int ky = wavenumber(ay, n);
            for (int ax = 0; ax < n; ++ax) {
                const int kx = wavenumber(ax, n);
                if (std::abs(kx) == n / 2 || std::abs(ky) == n / 2) continue;
                const auto d = u.coef(c, kx, ky) - std::conj(u.coef(c, -kx, -ky));
                worst = std::max(worst, std::abs(d));
            }
        }
    return worst;
}

std::complex<double> mean_mode(const SpectralField& u) {
    return u.coef(0, 0, 0) + u.coef(1, 0, 0);
}

SpectralField trig_mode(int n, int kx, int ky, Parity parity) {
    check_even(n);
    if (kx == 0 && ky == 0) throw param_error("trig_mode: k must be nonzero");
    if (std::abs(kx) >= n / 2 || std::abs(ky) >= n / 2)
        throw param_error("trig_mode: |k| must be below the Nyquist ring");
    const double norm = std::sqrt(double(kx) * kx + double(ky) * ky);
    // unit polarization orthogonal to k
    const double ax = -ky / norm;
    const double ay = kx / norm;
    // sqrt(2) amplitude gives unit L2 norm under the normalized measure
    const double amp = std::sqrt(2.0) / 2.0;  // per +-k coefficient
    SpectralField e(n);
    if (parity == Parity::cos) {
        e.coef(0, kx, ky) = amp * ax;
        e.coef(1, kx, ky) = amp * ay;
        e.coef(0, -kx, -ky) = amp * ax;
        e.coef(1, -kx, -ky) = amp * ay;
    } else {
        const std::complex<double> mi(0.0, -1.0);
        e.coef(0, kx, ky) = mi * amp * ax;
        e.coef(1, kx, ky) = mi * amp * ay;
        e.coef(0, -kx, -ky) = std::conj(mi * amp * ax);
        e.coef(1, -kx, -ky) = std::conj(mi * amp * ay);
    }
    return e;
}

std::vector<double> to_physical(const SpectralField& u, int comp) {
    const int n = u.n();
    auto buf = to_phys_complex(n, u.comp(comp));
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
    return out;
}

double max_velocity(const SpectralField& u) {
    auto vx = to_physical(u, 0);
    auto vy = to_physical(u, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < vx.size(); ++i)
        worst = std::max(worst, std::hypot(vx[i], vy[i]));
    return worst;
}

}  // namespace sfns
