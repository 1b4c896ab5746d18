#include "cnls/odesys.hpp"

#include <cmath>

namespace cnls {

CubicSystem CubicSystem::paper_system(double lambda1, double lambda6) {
    CubicSystem s;
    s.lambdas = {lambda1, 0.0, 0.0, 0.0, 0.0, lambda6, 0.0, 0.0};
    return s;
}

CubicSystem CubicSystem::new_ode_1() {
    CubicSystem s;
    s.lambdas = {1.0, 0.0, -3.0, 0.0, 0.0, 3.0, 0.0, -1.0};
    return s;
}

CubicSystem CubicSystem::new_ode_2() {
    CubicSystem s;
    s.lambdas = {1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0};
    return s;
}

CubicSystem CubicSystem::decoupled_source() {
    CubicSystem s;
    s.lambdas = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
    return s;
}

CubicSystem CubicSystem::from_preset(const std::string& name, double lambda1, double lambda6) {
    if (name == "paper") return paper_system(lambda1, lambda6);
    if (name == "new1") return new_ode_1();
    if (name == "new2") return new_ode_2();
    if (name == "source") return decoupled_source();
    throw ConfigError("unknown ODE system preset: " + name);
}

namespace {

// N_ell for one row of couplings (l_a, l_b, l_c, l_d):
//   3 l_a |A1|^2 A1 + l_b (2|A1|^2 A2 + A1^2 conj(A2))
//   + l_c (2 A1 |A2|^2 + conj(A1) A2^2) + 3 l_d |A2|^2 A2
cplx cubic_row(double la, double lb, double lc, double ld, cplx a1, cplx a2) {
    const double m1 = std::norm(a1);
    const double m2 = std::norm(a2);
    cplx out = 3.0 * la * m1 * a1;
    if (lb != 0.0) out += lb * (2.0 * m1 * a2 + a1 * a1 * std::conj(a2));
    if (lc != 0.0) out += lc * (2.0 * a1 * m2 + std::conj(a1) * a2 * a2);
    out += 3.0 * ld * m2 * a2;
    return out;
}

} // namespace

std::array<cplx, 2> rhs(const OdeState& state, const CubicSystem& system) {
    const auto& l = system.lambdas;
    const cplx n1 = cubic_row(l[0], l[1], l[2], l[3], state.a1, state.a2);
    const cplx n2 = cubic_row(l[4], l[5], l[6], l[7], state.a1, state.a2);
    const cplx factor = cplx{0.0, -1.0} / state.t;
    return {factor * n1, factor * n2};
}

OdeState integrate_rk4(const OdeState& state0, double t_end, std::size_t n_steps,
                       const CubicSystem& system) {
    if (!(state0.t >= 1.0)) throw ConfigError("integrate_rk4 requires t0 >= 1");
    if (t_end < state0.t) throw ConfigError("integrate_rk4 requires t_end >= t0");
    if (n_steps == 0) throw ConfigError("integrate_rk4 requires n_steps >= 1");
    if (t_end == state0.t) return state0;

    // Autonomous in sigma = log t: dA/dsigma = -i N(A).
    const double dsigma = std::log(t_end / state0.t) / static_cast<double>(n_steps);
    const double sigma0 = std::log(state0.t);

    auto deriv = [&](cplx a1, cplx a2) -> std::array<cplx, 2> {
        OdeState s{1.0, a1, a2};  // rhs at t = 1 equals -i N(A) = dA/dsigma
        return rhs(s, system);
    };

    cplx a1 = state0.a1;
    cplx a2 = state0.a2;
    double t_prev = state0.t;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t_next =
            (k + 1 == n_steps) ? t_end : std::exp(sigma0 + dsigma * static_cast<double>(k + 1));
        if (t_next <= t_prev)
            throw StepUnderflowError("log-time step failed to advance t");
        const auto k1 = deriv(a1, a2);
        const auto k2 = deriv(a1 + 0.5 * dsigma * k1[0], a2 + 0.5 * dsigma * k1[1]);
        const auto k3 = deriv(a1 + 0.5 * dsigma * k2[0], a2 + 0.5 * dsigma * k2[1]);
        const auto k4 = deriv(a1 + dsigma * k3[0], a2 + dsigma * k3[1]);
        a1 += (dsigma / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        a2 += (dsigma / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        t_prev = t_next;
    }
    return OdeState{t_end, a1, a2};
}

} // namespace cnls
