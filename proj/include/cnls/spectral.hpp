#pragma once

#include <string>
#include <vector>

#include "cnls/grid.hpp"

namespace cnls {

// Non-fatal solver notices (window truncation and the like). Ops that can
// warn take an optional pointer; nullptr drops the notes.
struct Warnings {
    std::vector<std::string> notes;
    void add(std::string note) { notes.push_back(std::move(note)); }
    bool empty() const noexcept { return notes.empty(); }
};

struct Norms {
    double l2 = 0.0;
    double linf = 0.0;
    double h1 = 0.0;
    double h01 = 0.0;
    double j_norm = 0.0;
};

// Continuous unitary Fourier transform
//   (Ff)(xi) = (2*pi)^{-1/2} \int e^{-i x xi} f(x) dx
// realized by an FFT plus the offset-grid corrections. With x_j = -L/2 + j*dx
// and xi_m = 2*pi*m/L the offset phase e^{-i x_0 xi_m} collapses to (-1)^m, so
//   cft:  out[m + n/2] = dx (2*pi)^{-1/2} (-1)^m FFT[f][m mod n]
//   icft: in[m + n/2] -> (-1)^m -> inverse FFT -> * (2*pi)^{1/2} / L
// which is exactly unitary in the discrete L^2 norms and inverts to rounding.
Field cft(const Field& f);
Field icft(const Field& f);

// Schrodinger group U(t) = exp(i t d_x^2 / 2): multiplier e^{-i t xi^2 / 2}.
// Physical fields are transported through cft/icft; frequency fields are
// multiplied in place.
Field free_propagate(const Field& f, double t);

// M(t) = e^{i x^2 / 2t} (multiplication). Throws ZeroTime at t = 0.
Field apply_M(const Field& f, double t);
Field apply_Minv(const Field& f, double t);

// D(t) f = t^{-1/2} f(x/t) e^{-i pi/4}: dilation by cubic interpolation onto
// the grid the input lives on; a frequency input is reinterpreted as the
// function being dilated and lands on the physical nodes.
Field apply_D(const Field& f, double t, Warnings* warn = nullptr, double mass_tol = 1e-6);

// J(t) = U(t) x U(-t) = x + i t d_x (spectral derivative, Nyquist zeroed).
Field apply_J(const Field& f, double t);

// Spectral derivative d/dx of a physical field.
Field spectral_dx(const Field& f);

// d/dxi of a frequency field via the -i*x conjugation.
std::vector<cplx> xi_derivative(const GridPtr& grid, const std::vector<cplx>& values);

// || U(t) f - M(t) D(t) F M(t) f ||_L2 / ||f||_L2, computed with the module's
// own operators; the identity is exact, so the residual is discretization error.
double factorization_residual(const Field& f, double t, Warnings* warn = nullptr);

// || (F M(t) F^{-1} - 1) f ||_Linf. The sandwich equals U(-1/t).
double chirp_residual(const Field& f, double t);

Norms norms(const Field& f, double t_context = 0.0);

double l2_norm(const Field& f);
double linf_norm(const Field& f);

// Raw-sample sandwiches shared by the profile-frame solver and the residual
// evaluator. `values` are samples on the grid's xi nodes.
std::vector<cplx> fmf_inv(const GridPtr& grid, const std::vector<cplx>& values, double t);
std::vector<cplx> f_minv_finv(const GridPtr& grid, const std::vector<cplx>& values, double t);
std::vector<cplx> f_mminus1_finv(const GridPtr& grid, const std::vector<cplx>& values, double t);

} // namespace cnls
