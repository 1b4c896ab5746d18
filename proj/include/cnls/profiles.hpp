#pragma once

#include <array>
#include <string>
#include <vector>

#include "cnls/coeffs.hpp"
#include "cnls/grid.hpp"
#include "cnls/spectral.hpp"

namespace cnls {

// Prescribed scattering data (W1, W2) sampled on a grid's xi nodes.
struct FinalData {
    GridPtr grid;
    std::vector<cplx> w1;
    std::vector<cplx> w2;

    FinalData() = default;
    FinalData(GridPtr g, std::vector<cplx> w1_, std::vector<cplx> w2_);

    double max_abs_w1() const;
    double max_abs_w2() const;
};

// a * exp(-(xi - center)^2 / sigma^2) * e^{i phase}
struct GaussianSpec {
    double amplitude = 0.0;
    double sigma = 1.0;
    double center = 0.0;
    double phase = 0.0;
};

std::vector<cplx> sample_gaussian(const std::vector<double>& nodes, const GaussianSpec& spec);
FinalData make_gaussian_final_data(const GridPtr& grid, const GaussianSpec& w1,
                                   const GaussianSpec& w2);

// CSV schema: xi,re_W1,im_W1,re_W2,im_W2 (one row per node).
void write_final_data_csv(const FinalData& data, const std::string& path);
FinalData read_final_data_csv(const GridPtr& grid, const std::string& path);

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
std::array<cplx, 2> mat2_apply(const Mat2& m, const std::array<cplx, 2>& v);

// Diagonalization data of the leading 2x2 system at one xi node. P carries the
// eigenvectors of [[eta, -l6 e^{2i theta}], [l6 e^{-2i theta}, -eta]] (eigenvalues
// +-i mu); Q(t) = diag(t^{-mu |W1|^2}, t^{+mu |W1|^2}).
struct Diagonalizer {
    double theta = 0.0;   // e^{i theta} = W1/|W1|
    double w1sq = 0.0;    // |W1|^2
    Mat2 p{};
    Mat2 pinv{};
};

Diagonalizer build_diagonalizer(std::size_t xi_index, const FinalData& data,
                                const Coefficients& coeffs);

// Q(t) for a given |W1|^2; satisfies the group law Q(t) Q(tau)^{-1} = Q(t/tau).
Mat2 q_matrix(double t, double mu, double w1sq);

// Leading-order transport w(t1) from w(t0): first component of
// P Q(t1/t0) P^{-1} (w0, conj(w0)); identity on the W1 = 0 branch.
cplx evolve_w_leading(cplx w0, double t0, double t1, const Diagonalizer& diag,
                      const Coefficients& coeffs);

// F1(t, xi) = W1 e^{-3 i lambda1 |W1|^2 log t}
std::vector<cplx> eval_f1(double t, const FinalData& data, const Coefficients& coeffs);

// Two-mode closed form of the modified amplitude; W2 on the W1 = 0 branch
// (relative cutoff zero_tol * max|W1|). Deceleration regime only.
std::vector<cplx> eval_w2tilde(double t, const FinalData& data, const Coefficients& coeffs,
                               double zero_tol = 1e-10);

// F2(t, xi) = w2tilde(t, xi) e^{-3 i lambda1 |W1|^2 log t}
std::vector<cplx> eval_f2(double t, const FinalData& data, const Coefficients& coeffs,
                          double zero_tol = 1e-10);

// Asymptotic profile on the physical nodes:
//   t^{-1/2} F_j(t, x/t) e^{i x^2/2t - i pi/4}
// with F_j interpolated cubically on the xi nodes. Warns when more than
// mass_tol of the |W_j|^2 mass lies outside the mapped window |xi| <= L/(2t).
Field sample_uap(double t, int j, const FinalData& data, const Coefficients& coeffs,
                 const GridPtr& grid, Warnings* warn = nullptr, double mass_tol = 1e-6);

} // namespace cnls
