#pragma once

#include <utility>
#include <vector>

#include "cnls/coeffs.hpp"
#include "cnls/evolve.hpp"
#include "cnls/profiles.hpp"

namespace cnls {

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t n_points = 0;
};

// Least-squares line on (log t, log v) inside [t_lo, t_hi]; the slope is the
// fitted power-law exponent. Requires >= 8 in-window points, all positive.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double t_lo, double t_hi);

struct ScatteringData {
    std::vector<double> times;                    // snapshot times used
    std::vector<cplx> alpha;                      // final estimate e^{3 i l1 Phi1} v1
    std::vector<double> phi1_final;               // Phi1(t_end, xi)
    std::vector<double> theta1;                   // limit of Phi1 - |alpha|^2 log t
    std::vector<cplx> w1_est;                     // e^{-3 i l1 theta1} alpha
    std::vector<std::vector<cplx>> alpha_series;  // per-snapshot estimates
};

// Scattering-data extraction from a forward run with u1 snapshots:
// v1 = F U(-t) u1(t), Phi1 accumulated by trapezoid quadrature in log t,
// theta1 from Phi1 - |alpha|^2 log t averaged over the last two snapshots.
// Requires >= 16 snapshots starting at t >= 1.
ScatteringData extract_scattering(const Trajectory& trajectory, const Coefficients& coeffs);

struct ProfileErrorSeries {
    std::vector<double> times;
    std::vector<double> errl2_1, errlinf_1, errl2_2, errlinf_2;
};

// || snapshot - u_ap,j || per snapshot time, in L2 and Linf.
ProfileErrorSeries profile_error(const Trajectory& trajectory, const FinalData& data,
                                 const Coefficients& coeffs);

// W2 solving (mu + i eta) W2 - i lambda6 e^{2 i theta} conj(W2) = 0 pointwise
// with a free real amplitude r: W2 = r e^{i psi}, psi = arg(i l6 e^{2i theta}/(mu+i eta))/2.
// W1 must be real-valued (passed as reals); Deceleration regime only.
FinalData make_vanishing_data(const GridPtr& grid, const std::vector<double>& w1,
                              const std::vector<double>& r, const Coefficients& coeffs);

// Pointwise nonvanishing mask: |(mu+i eta) W2 - i l6 e^{2i theta} conj(W2)| >
// 1e-10 (|W2| + 1) and |W1| > 0.
std::vector<bool> check_nonvanishing(const FinalData& data, const Coefficients& coeffs);

} // namespace cnls
