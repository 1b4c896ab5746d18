#pragma once

#include <array>
#include <complex>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

using cplx = std::complex<double>;

// General two-component cubic system
//   i A_1' = t^{-1} N_1,  N_1 = 3 l1 |A1|^2 A1 + l2 (2|A1|^2 A2 + A1^2 conj(A2))
//                             + l3 (2 A1 |A2|^2 + conj(A1) A2^2) + 3 l4 |A2|^2 A2
//   i A_2' = t^{-1} N_2,  N_2 analogous with l5..l8.
struct CubicSystem {
    std::array<double, 8> lambdas{};  // l1..l8

    static CubicSystem paper_system(double lambda1, double lambda6);
    static CubicSystem new_ode_1();
    static CubicSystem new_ode_2();
    static CubicSystem decoupled_source();
    static CubicSystem from_preset(const std::string& name, double lambda1, double lambda6);
};

struct OdeState {
    double t = 1.0;
    cplx a1{0.0, 0.0};
    cplx a2{0.0, 0.0};
};

// Right-hand side (-i/t) (N_1, N_2).
std::array<cplx, 2> rhs(const OdeState& state, const CubicSystem& system);

// Classical RK4 with steps uniform in log t (the flow is autonomous in log t
// since the RHS carries the t^{-1} factor). Throws StepUnderflow when a step
// fails to advance t in floating point.
OdeState integrate_rk4(const OdeState& state0, double t_end, std::size_t n_steps,
                       const CubicSystem& system);

} // namespace cnls
