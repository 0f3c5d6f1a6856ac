#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sfns {

// Real, zero-mean, divergence-free velocity fields on the 2D torus [0,2pi)^2,
// stored as Fourier coefficients u_hat(k) for k on the centered integer
// lattice. Layout follows the usual FFT index order: index a in [0,n) maps to
// wavenumber a for a <= n/2 and a-n otherwise. The Nyquist ring |k| = n/2 is
// kept identically zero so that conjugate symmetry u_hat(-k) = conj(u_hat(k))
// is unambiguous.
//
// Normalization: the forward transform carries 1/n^2, so u_hat(0) is the
// spatial mean and Parseval reads  mean_x |u(x)|^2 = sum_k |u_hat(k)|^2.
// All norms below are with respect to the normalized measure dx/(2pi)^2.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int n);

    int n() const { return n_; }
    static constexpr int dim = 2;

    std::complex<double>& coef(int comp, int kx, int ky) {
        return a_[idx(comp, kx, ky)];
    }
    const std::complex<double>& coef(int comp, int kx, int ky) const {
        return a_[idx(comp, kx, ky)];
    }

    std::complex<double>* data() { return a_.data(); }
    const std::complex<double>* data() const { return a_.data(); }
    std::size_t size() const { return a_.size(); }

    // component c as a contiguous n*n block
    std::complex<double>* comp(int c) { return a_.data() + static_cast<std::size_t>(c) * n_ * n_; }
    const std::complex<double>* comp(int c) const {
        return a_.data() + static_cast<std::size_t>(c) * n_ * n_;
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    void set_zero();
    bool empty() const { return n_ == 0; }

private:
    std::size_t idx(int comp, int kx, int ky) const {
        const int ax = kx >= 0 ? kx : kx + n_;
        const int ay = ky >= 0 ? ky : ky + n_;
        return (static_cast<std::size_t>(comp) * n_ + ay) * n_ + ax;
    }

    int n_ = 0;
    std::vector<std::complex<double>> a_;
};

// y += s * x
void axpy(double s, const SpectralField& x, SpectralField& y);

// Leray projection: removes the mean and the gradient part,
// u_hat(k) -> u_hat(k) - k (k.u_hat(k)) / |k|^2. Idempotent, self-adjoint.
SpectralField leray_project(const SpectralField& f);

// Raw entry point used by deserialization: validates the component count
// before interpreting the buffer as a 2D field.
SpectralField leray_project_raw(int n, int ncomp, const std::vector<std::complex<double>>& coeffs);

// Stokes operator A = (Leray) Laplacian: multiplier -|k|^2 on divergence-free
// fields.
SpectralField stokes_apply(const SpectralField& u);

// exp(s * nu * A): heat multiplier exp(-nu |k|^2 s), applied in place.
void heat_multiply(SpectralField& u, double nu_s);

// Convective nonlinearity  Pi (u . grad) v, evaluated pseudo-spectrally with
// 2/3-rule dealiasing (cutoff K = n/3) and a final projection.
SpectralField convection(const SpectralField& u, const SpectralField& v);

// Iterated form  convection(f2, convection(f1, phi)).
SpectralField convection2(const SpectralField& f1, const SpectralField& f2,
                          const SpectralField& phi);

// sqrt( sum_k |k|^{2s} |u_hat(k)|^2 ), k != 0. s = 0 is the L2 norm.
double sobolev_norm(const SpectralField& u, double s);
double l2_norm(const SpectralField& u);

// L2 inner product (real part; exact for conjugate-symmetric fields).
double inner_product(const SpectralField& u, const SpectralField& v);

// Diagnostics for the field invariants.
double divergence_defect(const SpectralField& u);       // max_k |k.u_hat| / ||u||
double conjugate_symmetry_defect(const SpectralField& u);
std::complex<double> mean_mode(const SpectralField& u);

// Unit-norm divergence-free trigonometric mode
//   sqrt(2) * (k_perp/|k|) * sin(k.x)  or  ... * cos(k.x).
// These span the standard orthonormal building blocks for noise bases and
// initial data.
enum class Parity { sin, cos };
SpectralField trig_mode(int n, int kx, int ky, Parity parity);

// Physical-space samples of one component on the n x n collocation grid
// (row-major, x fastest). Used by diagnostics and the CFL estimate.
std::vector<double> to_physical(const SpectralField& u, int comp);

// max over the grid of |u(x)| (Euclidean norm of the velocity vector).
double max_velocity(const SpectralField& u);

// dealiasing cutoff used by convection()
int dealias_cutoff(int n);

}  // namespace sfns
