#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cnls/coeffs.hpp"
#include "cnls/grid.hpp"
#include "cnls/profiles.hpp"
#include "cnls/spectral.hpp"

namespace cnls {

struct FieldPair {
    Field u1;
    Field u2;
    double t = 0.0;

    FieldPair() = default;
    FieldPair(Field u1_, Field u2_, double t_);
};

enum class RunMode { physical, profile_frame };

struct SolverConfig {
    RunMode mode = RunMode::physical;
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.01;              // physical mode step (magnitude)
    int steps_per_decade = 512;    // profile-frame log-time resolution
    std::vector<double> snapshot_times;
    double leak_tol = 1e-6;
    bool store_snapshots = false;
};

struct Observables {
    double l2_u1 = 0.0, linf_u1 = 0.0, j_u1 = 0.0;
    double l2_u2 = 0.0, linf_u2 = 0.0, j_u2 = 0.0;
    double errl2_1 = 0.0, errlinf_1 = 0.0, errl2_2 = 0.0, errlinf_2 = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Observables> observables;
    bool has_errors = false;
    std::vector<double> snapshot_times;
    std::vector<FieldPair> snapshots;
    Warnings warnings;

    std::vector<double> series(const std::string& quantity) const;
};

// One Strang step: half-step free propagation, exact nonlinear substep, half
// step free propagation. The u1 substep is the exact phase rotation
// e^{-3 i lambda1 |u1|^2 dt}; the u2 substep is the exact matrix exponential
// exp(-i lambda6 |u1|^2 dt A), A = [[2, e^{2i phi}], [-e^{-2i phi}, -2]] with
// A^2 = 3I, u1 frozen at its mid-substep phase. Throws DomainExhaustion when
// the mass fraction of either component beyond |x| >= L/4 exceeds leak_tol.
FieldPair strang_step(const FieldPair& state, double dt, const Coefficients& coeffs,
                      double leak_tol = 1e-6);

// Forward Cauchy solve in physical space; observables recorded at the step
// boundaries nearest the requested snapshot times (actual times stored).
Trajectory solve_cauchy(const FieldPair& initial, const SolverConfig& config,
                        const Coefficients& coeffs);

// Long-time integrator in the profile frame v_j = F U(-t) u_j:
//   i dv_j/dt = t^{-1} F M(t)^{-1} F^{-1} N_j(g_1, g_2),  g_j = F M(t) F^{-1} v_j
// stepped by RK4 uniformly in log t. Observables report reconstructed u_j
// quantities (||u_j||_L2 = ||v_j||_L2, ||u_j||_Linf = t^{-1/2} ||g_j||_Linf,
// ||J u_j||_L2 = ||d_xi v_j||_L2).
Trajectory solve_profile_frame(const FieldPair& initial_v, const SolverConfig& config,
                               const Coefficients& coeffs);

// Final-state (backward) solve: seeds u_j(T_max) = U(T_max) F^{-1} F_j(T_max)
// and integrates back to T with strang_step, recording profile errors
// ||u_j - u_ap,j|| in L2 and Linf at the snapshot times.
Trajectory solve_final_state(const FinalData& data, const Coefficients& coeffs, double T,
                             double T_max, const SolverConfig& config);

struct ResidualNorms {
    double l2 = 0.0;
    double j_norm = 0.0;
};

// Profile-equation residual, evaluated through the closed form
//   E_j = -t^{-1} M D F (M - 1) F^{-1} N_j(F1, F2).
// Both norms are taken in the xi frame (M and D are L2 isometries and
// J M D = M D i d_xi), so no large physical window is needed.
ResidualNorms residual_Ej(double t, const FinalData& data, const Coefficients& coeffs,
                          const GridPtr& grid, int j);

// Trajectory CSV:
//   t,l2_u1,linf_u1,j_u1,l2_u2,linf_u2,j_u2[,errl2_1,errlinf_1,errl2_2,errlinf_2]
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

} // namespace cnls
