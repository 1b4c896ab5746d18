#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cnls/odesys.hpp"

using namespace cnls;
using namespace std::complex_literals;

namespace {

// Closed-form solution of the paper system, kept local so this suite stays
// independent of the profiles module:
//   A1(t) = A1(1) e^{-3 i l1 |A1(1)|^2 log t}
//   A2(t) = first component of P Q(t) P^{-1} (w0, conj(w0)) times that phase,
// written out with the explicit two-mode coefficients.
std::array<cplx, 2> closed_form(double l1, double l6, cplx w1, cplx w2, double t) {
    const double eta = 3.0 * l1 - 2.0 * l6;
    const double mu = std::sqrt(l6 * l6 - eta * eta);
    const double w1sq = std::norm(w1);
    const cplx phase = std::polar(1.0, -3.0 * l1 * w1sq * std::log(t));

    cplx tilde;
    if (w1sq == 0.0) {
        tilde = w2;
    } else {
        const cplx e2it = w1 * w1 / w1sq;
        const cplx minus = ((mu - 1.0i * eta) * w2 + 1.0i * l6 * e2it * std::conj(w2)) / (2.0 * mu);
        const cplx plus = ((mu + 1.0i * eta) * w2 - 1.0i * l6 * e2it * std::conj(w2)) / (2.0 * mu);
        tilde = minus * std::pow(t, -mu * w1sq) + plus * std::pow(t, mu * w1sq);
    }
    return {w1 * phase, tilde * phase};
}

} // namespace

TEST_CASE("rhs vanishes on the zero state") {
    const auto sys = CubicSystem::paper_system(1.0, 1.5);
    const auto r = rhs(OdeState{1.0, 0.0, 0.0}, sys);
    CHECK(std::abs(r[0]) == 0.0);
    CHECK(std::abs(r[1]) == 0.0);
}

TEST_CASE("paper preset rhs at (1, 0)") {
    const auto sys = CubicSystem::paper_system(1.0, 1.5);
    const auto r = rhs(OdeState{1.0, 1.0, 0.0}, sys);
    CHECK(std::abs(r[0] - (-3.0i)) < 1e-15);
    CHECK(std::abs(r[1]) == 0.0);
}

TEST_CASE("new_ode_1 rhs at (1, 1)") {
    const auto sys = CubicSystem::new_ode_1();
    const auto r = rhs(OdeState{1.0, 1.0, 1.0}, sys);
    // N1 = 3 - 9 = -6, N2 = 9 - 3 = 6
    CHECK(std::abs(r[0] - 6.0i) < 1e-15);
    CHECK(std::abs(r[1] - (-6.0i)) < 1e-15);
}

TEST_CASE("new_ode_2 rhs at (1, 0.5)") {
    const auto sys = CubicSystem::new_ode_2();
    const auto r = rhs(OdeState{1.0, 1.0, 0.5}, sys);
    // N1 = 3 - (2*0.25 + 0.25) = 2.25, N2 = (2*0.5 + 0.5) - 3*0.125 = 1.125
    CHECK(std::abs(r[0] - (-2.25i)) < 1e-15);
    CHECK(std::abs(r[1] - (-1.125i)) < 1e-15);
}

TEST_CASE("rhs carries the t^{-1} factor") {
    const auto sys = CubicSystem::paper_system(1.0, 1.5);
    const auto r1 = rhs(OdeState{1.0, 1.0, 0.0}, sys);
    const auto r2 = rhs(OdeState{4.0, 1.0, 0.0}, sys);
    CHECK(std::abs(r2[0] - r1[0] / 4.0) < 1e-15);
}

TEST_CASE("all couplings zero leaves the state unchanged") {
    CubicSystem sys;
    const auto end = integrate_rk4(OdeState{1.0, 0.3 + 0.1i, -0.2i}, 50.0, 128, sys);
    CHECK(std::abs(end.a1 - (0.3 + 0.1i)) == 0.0);
    CHECK(std::abs(end.a2 - (-0.2i)) == 0.0);
    CHECK(end.t == 50.0);
}

TEST_CASE("paper flow preserves |A1|") {
    const auto sys = CubicSystem::paper_system(1.0, 1.5);
    const OdeState start{1.0, 0.7 - 0.2i, 0.4 + 0.9i};
    const double m0 = std::abs(start.a1);
    for (double t_end : {2.0, 10.0, 100.0}) {
        const auto end = integrate_rk4(start, t_end, 2048, sys);
        CHECK(std::abs(std::abs(end.a1) - m0) < 1e-10);
    }
}

TEST_CASE("RK4 matches the closed form in the deceleration preset") {
    const double l1 = 1.0, l6 = 1.5;
    const auto sys = CubicSystem::paper_system(l1, l6);
    const cplx w1 = 0.7;
    const cplx w2 = 1.0;
    const auto end = integrate_rk4(OdeState{1.0, w1, w2}, 10.0, 4096, sys);
    const auto exact = closed_form(l1, l6, w1, w2, 10.0);
    CHECK(std::abs(end.a1 - exact[0]) < 1e-7);
    CHECK(std::abs(end.a2 - exact[1]) < 1e-7);
}

TEST_CASE("RK4 is fourth order against the closed form") {
    const double l1 = 1.0, l6 = 1.5;
    const auto sys = CubicSystem::paper_system(l1, l6);
    const OdeState start{1.0, cplx{0.6, 0.2}, cplx{0.8, -0.3}};
    const auto exact = closed_form(l1, l6, start.a1, start.a2, 20.0);

    auto err = [&](std::size_t steps) {
        const auto end = integrate_rk4(start, 20.0, steps, sys);
        return std::abs(end.a1 - exact[0]) + std::abs(end.a2 - exact[1]);
    };
    const double ratio = err(64) / err(128);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("exploratory presets stay bounded at small amplitude") {
    for (const auto& sys : {CubicSystem::new_ode_1(), CubicSystem::new_ode_2()}) {
        const auto end = integrate_rk4(OdeState{1.0, 0.1, 0.1}, 100.0, 4096, sys);
        CHECK(std::isfinite(std::abs(end.a1)));
        CHECK(std::isfinite(std::abs(end.a2)));
        CHECK(std::abs(end.a1) < 10.0);
        CHECK(std::abs(end.a2) < 10.0);
    }
}

TEST_CASE("decoupled source preset grows A2 linearly in log t") {
    const auto sys = CubicSystem::decoupled_source();
    const cplx a1 = 0.5;
    const auto end = integrate_rk4(OdeState{1.0, a1, 0.0}, std::exp(1.0), 4096, sys);
    // i A2' = 3 t^{-1} |A1|^2 A1 with A1 frozen => A2(e) = -3 i |A1|^2 A1
    CHECK(std::abs(end.a1 - a1) < 1e-12);
    CHECK(std::abs(end.a2 - (-3.0i * std::norm(a1) * a1)) < 1e-10);
}

TEST_CASE("degenerate intervals") {
    const auto sys = CubicSystem::paper_system(1.0, 1.5);
    const OdeState start{2.0, 0.1, 0.2};
    const auto same = integrate_rk4(start, 2.0, 16, sys);
    CHECK(same.t == 2.0);
    CHECK(std::abs(same.a1 - start.a1) == 0.0);
    CHECK_THROWS_AS(integrate_rk4(start, 2.0 * (1.0 + 1e-15), 100, sys), StepUnderflowError);
}
