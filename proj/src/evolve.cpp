#include "cnls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cnls {

FieldPair::FieldPair(Field u1_, Field u2_, double t_)
    : u1(std::move(u1_)), u2(std::move(u2_)), t(t_) {
    if (u1.grid != u2.grid) throw GridMismatchError("field pair components on different grids");
    if (u1.space != u2.space) throw GridMismatchError("field pair components in different spaces");
}

namespace {

void check_leak(const Field& f, double leak_tol, const char* label) {
    const auto& g = *f.grid;
    const double quarter = 0.25 * g.length;
    double total = 0.0, outside = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double m = std::norm(f.values[j]);
        total += m;
        if (std::abs(g.x[j]) >= quarter) outside += m;
    }
    if (total > 0.0 && outside / total > leak_tol)
        throw DomainExhaustionError(std::string(label) + " mass beyond |x| >= L/4 is " +
                                    std::to_string(outside / total) + " of the total");
}

void check_finite(double v, double t) {
    if (!std::isfinite(v))
        throw NonFiniteError("non-finite norm at t = " + std::to_string(t));
}

Observables record_physical(const FieldPair& s) {
    Observables o;
    const Norms n1 = norms(s.u1, s.t);
    const Norms n2 = norms(s.u2, s.t);
    o.l2_u1 = n1.l2;
    o.linf_u1 = n1.linf;
    o.j_u1 = n1.j_norm;
    o.l2_u2 = n2.l2;
    o.linf_u2 = n2.linf;
    o.j_u2 = n2.j_norm;
    for (double v : {o.l2_u1, o.linf_u1, o.j_u1, o.l2_u2, o.linf_u2, o.j_u2})
        check_finite(v, s.t);
    return o;
}

// Map requested snapshot times onto step indices (nearest boundary), always
// including the first and last step.
std::map<std::size_t, double> snapshot_steps(const std::vector<double>& requested,
                                             std::size_t nsteps,
                                             const std::function<double(std::size_t)>& t_of,
                                             const std::function<double(double)>& k_of) {
    std::map<std::size_t, double> out;
    out[0] = t_of(0);
    out[nsteps] = t_of(nsteps);
    for (double s : requested) {
        const double kf = k_of(s);
        if (kf < -0.5 || kf > static_cast<double>(nsteps) + 0.5) continue;
        auto k = static_cast<std::size_t>(std::llround(std::clamp(
            kf, 0.0, static_cast<double>(nsteps))));
        out[k] = t_of(k);
    }
    return out;
}

} // namespace

FieldPair strang_step(const FieldPair& state, double dt, const Coefficients& coeffs,
                      double leak_tol) {
    if (state.u1.space != Space::physical)
        throw GridMismatchError("strang_step expects physical-space fields");

    FieldPair out = state;
    out.u1 = free_propagate(out.u1, 0.5 * dt);
    out.u2 = free_propagate(out.u2, 0.5 * dt);

    const double l1 = coeffs.lambda1;
    const double l6 = coeffs.lambda6;
    const double sqrt3 = std::sqrt(3.0);
    for (std::size_t j = 0; j < out.u1.size(); ++j) {
        const cplx a = out.u1.values[j];
        const double m2 = std::norm(a);
        if (m2 == 0.0) continue;
        // u1: exact phase rotation; modulus is invariant over the substep
        out.u1.values[j] = a * std::polar(1.0, -3.0 * l1 * m2 * dt);
        // u2: exact exponential of A = [[2, e^{2i phi}], [-e^{-2i phi}, -2]]
        // (A^2 = 3I) with u1 frozen at its mid-substep phase
        const double phi = std::arg(a) - 1.5 * l1 * m2 * dt;
        const double tau = l6 * m2 * dt;
        const double c = std::cos(sqrt3 * tau);
        const double s = std::sin(sqrt3 * tau) / sqrt3;
        const cplx b = out.u2.values[j];
        out.u2.values[j] =
            (c - cplx{0.0, 2.0 * s}) * b - cplx{0.0, s} * std::polar(1.0, 2.0 * phi) * std::conj(b);
    }

    out.u1 = free_propagate(out.u1, 0.5 * dt);
    out.u2 = free_propagate(out.u2, 0.5 * dt);
    out.t = state.t + dt;

    check_leak(out.u1, leak_tol, "u1");
    check_leak(out.u2, leak_tol, "u2");
    return out;
}

Trajectory solve_cauchy(const FieldPair& initial, const SolverConfig& config,
                        const Coefficients& coeffs) {
    if (config.mode != RunMode::physical)
        throw ConfigError("solve_cauchy runs in physical mode");
    if (!(config.t1 > config.t0)) throw ConfigError("forward solve needs t1 > t0");
    if (!(config.dt > 0.0)) throw ConfigError("dt must be positive");
    if (initial.u1.space != Space::physical)
        throw GridMismatchError("solve_cauchy expects physical-space initial data");

    const double span = config.t1 - config.t0;
    const auto nsteps = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(span / config.dt)));
    const double dt = span / static_cast<double>(nsteps);

    auto t_of = [&](std::size_t k) { return config.t0 + dt * static_cast<double>(k); };
    auto k_of = [&](double s) { return (s - config.t0) / dt; };
    const auto record_at = snapshot_steps(config.snapshot_times, nsteps, t_of, k_of);

    Trajectory traj;
    FieldPair state = initial;
    state.t = config.t0;
    for (std::size_t k = 0;; ++k) {
        if (record_at.count(k)) {
            traj.times.push_back(state.t);
            traj.observables.push_back(record_physical(state));
            if (config.store_snapshots) {
                traj.snapshot_times.push_back(state.t);
                traj.snapshots.push_back(state);
            }
        }
        if (k == nsteps) break;
        state = strang_step(state, dt, coeffs, config.leak_tol);
        state.t = t_of(k + 1);  // keep recorded times free of additive drift
    }
    return traj;
}

namespace {

struct ProfileState {
    std::vector<cplx> v1;
    std::vector<cplx> v2;
};

ProfileState profile_rhs(const GridPtr& grid, const ProfileState& s, double t,
                         const Coefficients& coeffs) {
    const auto g1 = fmf_inv(grid, s.v1, t);
    const auto g2 = fmf_inv(grid, s.v2, t);
    const std::size_t n = grid->n;
    std::vector<cplx> n1(n), n2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double m1 = std::norm(g1[k]);
        n1[k] = 3.0 * coeffs.lambda1 * m1 * g1[k];
        n2[k] = coeffs.lambda6 * (2.0 * m1 * g2[k] + g1[k] * g1[k] * std::conj(g2[k]));
    }
    auto r1 = f_minv_finv(grid, n1, t);
    auto r2 = f_minv_finv(grid, n2, t);
    const cplx mi{0.0, -1.0};  // dv/dsigma = -i F M^{-1} F^{-1} N, sigma = log t
    for (auto& z : r1) z *= mi;
    for (auto& z : r2) z *= mi;
    return ProfileState{std::move(r1), std::move(r2)};
}

void axpy(std::vector<cplx>& y, double a, const std::vector<cplx>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

} // namespace

Trajectory solve_profile_frame(const FieldPair& initial_v, const SolverConfig& config,
                               const Coefficients& coeffs) {
    if (config.mode != RunMode::profile_frame)
        throw ConfigError("solve_profile_frame runs in profile_frame mode");
    if (!(std::min(config.t0, config.t1) >= 1.0))
        throw ConfigError("profile-frame solve needs times >= 1");
    if (config.t1 == config.t0) throw ConfigError("profile-frame solve needs t1 != t0");
    if (initial_v.u1.space != Space::frequency)
        throw GridMismatchError("profile-frame initial data must be frequency-space");
    if (config.steps_per_decade < 1) throw ConfigError("steps_per_decade must be >= 1");

    const GridPtr grid = initial_v.u1.grid;
    const bool backward = config.t1 < config.t0;
    const double sig0 = std::log(config.t0);
    const double span = std::log(config.t1) - sig0;
    const auto nsteps = static_cast<std::size_t>(std::max(
        1.0, std::ceil(config.steps_per_decade * std::abs(span) / std::log(10.0))));
    const double dsig = span / static_cast<double>(nsteps);

    auto t_of = [&](std::size_t k) {
        return k == nsteps ? config.t1 : std::exp(sig0 + dsig * static_cast<double>(k));
    };
    auto k_of = [&](double s) { return s > 0.0 ? (std::log(s) - sig0) / dsig : -1.0; };
    const auto record_at = snapshot_steps(config.snapshot_times, nsteps, t_of, k_of);

    ProfileState state{initial_v.u1.values, initial_v.u2.values};
    Trajectory traj;

    auto record = [&](double t) {
        Field v1(grid, Space::frequency, state.v1);
        Field v2(grid, Space::frequency, state.v2);
        const auto g1 = fmf_inv(grid, state.v1, t);
        const auto g2 = fmf_inv(grid, state.v2, t);
        const double rt = 1.0 / std::sqrt(t);
        Observables o;
        o.l2_u1 = l2_norm(v1);
        o.l2_u2 = l2_norm(v2);
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t k = 0; k < grid->n; ++k) {
            m1 = std::max(m1, std::abs(g1[k]));
            m2 = std::max(m2, std::abs(g2[k]));
        }
        o.linf_u1 = rt * m1;
        o.linf_u2 = rt * m2;
        Field dv1(grid, Space::frequency, xi_derivative(grid, state.v1));
        Field dv2(grid, Space::frequency, xi_derivative(grid, state.v2));
        o.j_u1 = l2_norm(dv1);
        o.j_u2 = l2_norm(dv2);
        for (double v : {o.l2_u1, o.linf_u1, o.j_u1, o.l2_u2, o.linf_u2, o.j_u2})
            check_finite(v, t);
        traj.times.push_back(t);
        traj.observables.push_back(o);
        if (config.store_snapshots) {
            traj.snapshot_times.push_back(t);
            traj.snapshots.emplace_back(v1, v2, t);
        }
    };

    for (std::size_t k = 0;; ++k) {
        if (record_at.count(k)) record(t_of(k));
        if (k == nsteps) break;
        const double sig = sig0 + dsig * static_cast<double>(k);
        const auto k1 = profile_rhs(grid, state, std::exp(sig), coeffs);
        ProfileState s2 = state;
        axpy(s2.v1, 0.5 * dsig, k1.v1);
        axpy(s2.v2, 0.5 * dsig, k1.v2);
        const double t_half = std::exp(sig + 0.5 * dsig);
        const auto k2 = profile_rhs(grid, s2, t_half, coeffs);
        ProfileState s3 = state;
        axpy(s3.v1, 0.5 * dsig, k2.v1);
        axpy(s3.v2, 0.5 * dsig, k2.v2);
        const auto k3 = profile_rhs(grid, s3, t_half, coeffs);
        ProfileState s4 = state;
        axpy(s4.v1, dsig, k3.v1);
        axpy(s4.v2, dsig, k3.v2);
        const auto k4 = profile_rhs(grid, s4, std::exp(sig + dsig), coeffs);
        const double w = dsig / 6.0;
        for (std::size_t i = 0; i < grid->n; ++i) {
            state.v1[i] += w * (k1.v1[i] + 2.0 * k2.v1[i] + 2.0 * k3.v1[i] + k4.v1[i]);
            state.v2[i] += w * (k1.v2[i] + 2.0 * k2.v2[i] + 2.0 * k3.v2[i] + k4.v2[i]);
        }
    }
    if (backward) {
        std::reverse(traj.times.begin(), traj.times.end());
        std::reverse(traj.observables.begin(), traj.observables.end());
        std::reverse(traj.snapshot_times.begin(), traj.snapshot_times.end());
        std::reverse(traj.snapshots.begin(), traj.snapshots.end());
    }
    return traj;
}

Trajectory solve_final_state(const FinalData& data, const Coefficients& coeffs, double T,
                             double T_max, const SolverConfig& config) {
    if (!coeffs.deceleration())
        throw WrongRegimeError("final-state solve requires the Deceleration regime");
    if (!(T >= 2.0 && T < T_max))
        throw ConfigError("final-state solve needs 2 <= T < T_max");
    if (!(config.dt > 0.0)) throw ConfigError("dt must be positive");

    const GridPtr grid = data.grid;
    // seed u_j(T_max) = U(T_max) F^{-1} F_j(T_max)
    Field f1(grid, Space::frequency, eval_f1(T_max, data, coeffs));
    Field f2(grid, Space::frequency, eval_f2(T_max, data, coeffs));
    FieldPair state(free_propagate(icft(f1), T_max), free_propagate(icft(f2), T_max), T_max);

    const double span = T_max - T;
    const auto nsteps = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(span / config.dt)));
    const double dt = -span / static_cast<double>(nsteps);

    auto t_of = [&](std::size_t k) { return T_max + dt * static_cast<double>(k); };
    auto k_of = [&](double s) { return (s - T_max) / dt; };
    const auto record_at = snapshot_steps(config.snapshot_times, nsteps, t_of, k_of);

    Trajectory traj;
    traj.has_errors = true;
    auto record = [&](const FieldPair& s) {
        Observables o = record_physical(s);
        const Field ap1 = sample_uap(s.t, 1, data, coeffs, grid, &traj.warnings);
        const Field ap2 = sample_uap(s.t, 2, data, coeffs, grid, &traj.warnings);
        Field d1(grid, Space::physical);
        Field d2(grid, Space::physical);
        for (std::size_t i = 0; i < grid->n; ++i) {
            d1.values[i] = s.u1.values[i] - ap1.values[i];
            d2.values[i] = s.u2.values[i] - ap2.values[i];
        }
        o.errl2_1 = l2_norm(d1);
        o.errlinf_1 = linf_norm(d1);
        o.errl2_2 = l2_norm(d2);
        o.errlinf_2 = linf_norm(d2);
        traj.times.push_back(s.t);
        traj.observables.push_back(o);
        if (config.store_snapshots) {
            traj.snapshot_times.push_back(s.t);
            traj.snapshots.push_back(s);
        }
    };

    for (std::size_t k = 0;; ++k) {
        if (record_at.count(k)) record(state);
        if (k == nsteps) break;
        state = strang_step(state, dt, coeffs, config.leak_tol);
        state.t = t_of(k + 1);
    }

    std::reverse(traj.times.begin(), traj.times.end());
    std::reverse(traj.observables.begin(), traj.observables.end());
    std::reverse(traj.snapshot_times.begin(), traj.snapshot_times.end());
    std::reverse(traj.snapshots.begin(), traj.snapshots.end());
    return traj;
}

ResidualNorms residual_Ej(double t, const FinalData& data, const Coefficients& coeffs,
                          const GridPtr& grid, int j) {
    if (!(t >= 2.0)) throw ConfigError("residual evaluation requires t >= 2");
    if (j != 1 && j != 2) throw ConfigError("residual index must be 1 or 2");
    if (grid != data.grid) throw GridMismatchError("residual grid must carry the final data");

    const auto f1 = eval_f1(t, data, coeffs);
    std::vector<cplx> nj(grid->n);
    if (j == 1) {
        for (std::size_t k = 0; k < grid->n; ++k)
            nj[k] = 3.0 * coeffs.lambda1 * std::norm(f1[k]) * f1[k];
    } else {
        const auto f2 = eval_f2(t, data, coeffs);
        for (std::size_t k = 0; k < grid->n; ++k)
            nj[k] = coeffs.lambda6 *
                    (2.0 * std::norm(f1[k]) * f2[k] + f1[k] * f1[k] * std::conj(f2[k]));
    }

    // E_j = -t^{-1} M D [F (M-1) F^{-1} N_j]; M and D are L2 isometries and
    // J M D = M D i d_xi, so both norms reduce to xi-frame norms of the core.
    const auto core = f_mminus1_finv(grid, nj, t);
    double acc = 0.0;
    for (const auto& z : core) acc += std::norm(z);
    ResidualNorms out;
    out.l2 = std::sqrt(grid->dxi * acc) / t;

    const auto dcore = xi_derivative(grid, core);
    acc = 0.0;
    for (const auto& z : dcore) acc += std::norm(z);
    out.j_norm = std::sqrt(grid->dxi * acc) / t;
    return out;
}

std::vector<double> Trajectory::series(const std::string& quantity) const {
    std::vector<double> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& o = observables[i];
        double v = 0.0;
        if (quantity == "t") v = times[i];
        else if (quantity == "l2_u1") v = o.l2_u1;
        else if (quantity == "linf_u1") v = o.linf_u1;
        else if (quantity == "j_u1") v = o.j_u1;
        else if (quantity == "l2_u2") v = o.l2_u2;
        else if (quantity == "linf_u2") v = o.linf_u2;
        else if (quantity == "j_u2") v = o.j_u2;
        else if (quantity == "errl2_1") v = o.errl2_1;
        else if (quantity == "errlinf_1") v = o.errlinf_1;
        else if (quantity == "errl2_2") v = o.errl2_2;
        else if (quantity == "errlinf_2") v = o.errlinf_2;
        else throw ConfigError("unknown trajectory quantity: " + quantity);
        out.push_back(v);
    }
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "t,l2_u1,linf_u1,j_u1,l2_u2,linf_u2,j_u2";
    if (traj.has_errors) out << ",errl2_1,errlinf_1,errl2_2,errlinf_2";
    out << "\n";
    char line[512];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& o = traj.observables[i];
        int len = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                                traj.times[i], o.l2_u1, o.linf_u1, o.j_u1, o.l2_u2, o.linf_u2,
                                o.j_u2);
        out.write(line, len);
        if (traj.has_errors) {
            len = std::snprintf(line, sizeof line, ",%.17g,%.17g,%.17g,%.17g", o.errl2_1,
                                o.errlinf_1, o.errl2_2, o.errlinf_2);
            out.write(line, len);
        }
        out << "\n";
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,l2_u1", 0) != 0)
        throw IoError("bad trajectory CSV header in " + path);
    Trajectory traj;
    traj.has_errors = line.find("errl2_1") != std::string::npos;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> row;
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        const std::size_t expect = traj.has_errors ? 11 : 7;
        if (row.size() != expect) throw IoError("bad trajectory CSV row in " + path);
        traj.times.push_back(row[0]);
        Observables o;
        o.l2_u1 = row[1];
        o.linf_u1 = row[2];
        o.j_u1 = row[3];
        o.l2_u2 = row[4];
        o.linf_u2 = row[5];
        o.j_u2 = row[6];
        if (traj.has_errors) {
            o.errl2_1 = row[7];
            o.errlinf_1 = row[8];
            o.errl2_2 = row[9];
            o.errlinf_2 = row[10];
        }
        traj.observables.push_back(o);
    }
    return traj;
}

} // namespace cnls
