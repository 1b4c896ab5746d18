// cnls — experiment driver for the coupled cubic Schrodinger laboratory.
//
// Subcommands:
//   regimes         coefficient classification table over a lambda grid
//   ode-check       closed-form profiles vs RK4 integration report
//   identity-check  operator identity suite (factorization, chirp conjugation, J, P/Q)
//   simulate        forward Cauchy or profile-frame run
//   final-state     backward run from a prescribed profile + error series
//   rates           power-law fit over a trajectory CSV
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure or a
// failed check. Errors are emitted as one JSON object on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "cnls/analysis.hpp"
#include "cnls/evolve.hpp"
#include "cnls/odesys.hpp"
#include "cnls/snapshot_io.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace cnls;

namespace {

struct CheckFailure {
    std::string message;
};

void print_error(const std::string& kind, const std::string& message) {
    json diag;
    diag["error"] = kind;
    diag["message"] = message;
    std::cerr << diag.dump() << "\n";
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return cfg;
}

const json& require_section(const json& cfg, const std::string& key) {
    if (!cfg.contains(key))
        throw ConfigError("config is missing the \"" + key + "\" section");
    return cfg.at(key);
}

double require_number(const json& node, const std::string& key, const std::string& where) {
    if (!node.contains(key) || !node.at(key).is_number())
        throw ConfigError(where + " needs a numeric \"" + key + "\"");
    return node.at(key).get<double>();
}

Coefficients coefficients_from(const json& cfg) {
    const auto& c = require_section(cfg, "coefficients");
    return derive(require_number(c, "lambda1", "coefficients"),
                  require_number(c, "lambda6", "coefficients"));
}

GridPtr grid_from(const json& cfg) {
    const auto& g = require_section(cfg, "grid");
    const double n = require_number(g, "n", "grid");
    const double length = require_number(g, "length", "grid");
    return Grid::make(static_cast<std::size_t>(n), length);
}

GaussianSpec gaussian_from(const json& node, const std::string& where) {
    GaussianSpec spec;
    spec.amplitude = require_number(node, "amplitude", where);
    spec.sigma = node.value("sigma", 1.0);
    spec.center = node.value("center", 0.0);
    spec.phase = node.value("phase", 0.0);
    if (!(spec.sigma > 0.0)) throw ConfigError(where + ": sigma must be positive");
    return spec;
}

// data.final: either {"csv": path} or generator specs for W1/W2; a W2 entry
// {"vanishing": {...}} builds the cancellation branch from W1.
FinalData final_data_from(const json& cfg, const GridPtr& grid, const Coefficients& coeffs) {
    const auto& data = require_section(cfg, "data");
    if (!data.contains("final"))
        throw ConfigError("config is missing data.final");
    const auto& fin = data.at("final");
    if (fin.contains("csv")) {
        const std::string path = fin.at("csv").get<std::string>();
        if (!fs::exists(path)) throw ConfigError("data.final.csv does not exist: " + path);
        return read_final_data_csv(grid, path);
    }
    if (!fin.contains("W1") || !fin.contains("W2"))
        throw ConfigError("data.final needs W1 and W2 generator specs (or a csv path)");
    const auto w1_spec = gaussian_from(fin.at("W1"), "data.final.W1");
    if (fin.at("W2").contains("vanishing")) {
        const auto r_spec = gaussian_from(fin.at("W2").at("vanishing"), "data.final.W2.vanishing");
        if (w1_spec.phase != 0.0)
            throw ConfigError("vanishing data requires a real-valued W1 (phase 0)");
        std::vector<double> w1(grid->n), r(grid->n);
        for (std::size_t k = 0; k < grid->n; ++k) {
            const double d1 = grid->xi[k] - w1_spec.center;
            w1[k] = w1_spec.amplitude * std::exp(-d1 * d1 / (w1_spec.sigma * w1_spec.sigma));
            const double d2 = grid->xi[k] - r_spec.center;
            r[k] = r_spec.amplitude * std::exp(-d2 * d2 / (r_spec.sigma * r_spec.sigma));
        }
        return make_vanishing_data(grid, w1, r, coeffs);
    }
    return make_gaussian_final_data(grid, w1_spec, gaussian_from(fin.at("W2"), "data.final.W2"));
}

std::vector<double> snapshot_times_from(const json& run) {
    if (!run.contains("snapshot_times")) return {};
    const auto& node = run.at("snapshot_times");
    if (node.is_array()) return node.get<std::vector<double>>();
    if (node.is_object() && node.contains("log")) {
        const auto& lg = node.at("log");
        const double from = require_number(lg, "from", "snapshot_times.log");
        const double to = require_number(lg, "to", "snapshot_times.log");
        const auto count = static_cast<int>(require_number(lg, "count", "snapshot_times.log"));
        if (!(from > 0.0 && to > from && count >= 2))
            throw ConfigError("snapshot_times.log needs 0 < from < to and count >= 2");
        std::vector<double> out;
        for (int i = 0; i < count; ++i)
            out.push_back(from * std::pow(to / from, static_cast<double>(i) / (count - 1)));
        return out;
    }
    throw ConfigError("snapshot_times must be an array or {\"log\": {from, to, count}}");
}

SolverConfig solver_config_from(const json& run, RunMode mode) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.t0 = run.value("t0", mode == RunMode::profile_frame ? 1.0 : 0.0);
    cfg.t1 = run.value("t1", 0.0);
    cfg.dt = run.value("dt", 0.01);
    cfg.steps_per_decade = run.value("steps_per_decade", 512);
    cfg.snapshot_times = snapshot_times_from(run);
    cfg.leak_tol = run.value("leak_tol", 1e-6);
    cfg.store_snapshots = run.value("store_snapshots", false);
    if (!(cfg.leak_tol > 0.0 && cfg.leak_tol < 1.0))
        throw ConfigError("run.leak_tol must lie in (0, 1)");
    return cfg;
}

fs::path ensure_outdir(const json& cfg, const std::string& override_dir) {
    std::string dir = override_dir;
    if (dir.empty() && cfg.contains("output") && cfg.at("output").contains("directory"))
        dir = cfg.at("output").at("directory").get<std::string>();
    if (dir.empty()) dir = "out";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> formats_from(const json& cfg) {
    if (cfg.contains("output") && cfg.at("output").contains("formats"))
        return cfg.at("output").at("formats").get<std::vector<std::string>>();
    return {"csv"};
}

void write_manifest(const fs::path& outdir, const std::string& subcommand, const json& resolved,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["config"] = resolved;
    manifest["outputs"] = outputs;
    std::ofstream out(outdir / "manifest.json");
    out << manifest.dump(2) << "\n";
}

void write_snapshots(const Trajectory& traj, const fs::path& outdir,
                     const std::vector<std::string>& formats, std::vector<std::string>& outputs) {
    const bool csv = std::count(formats.begin(), formats.end(), "csv") > 0;
    const bool bin = std::count(formats.begin(), formats.end(), "bin") > 0;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& s = traj.snapshots[i];
        char stem[64];
        std::snprintf(stem, sizeof stem, "snap_%03zu", i);
        for (int j = 1; j <= 2; ++j) {
            const Field& f = (j == 1) ? s.u1 : s.u2;
            const std::string base = std::string(stem) + "_u" + std::to_string(j);
            if (csv) {
                write_field_csv(f, s.t, (outdir / (base + ".csv")).string());
                outputs.push_back(base + ".csv");
            }
            if (bin) {
                write_field_binary(f, s.t, (outdir / (base + ".bin")).string());
                outputs.push_back(base + ".bin");
            }
        }
    }
}

// ---------------------------------------------------------------- regimes --

int cmd_regimes(const json& cfg, const fs::path& outdir) {
    const auto& spec = require_section(cfg, "regimes");
    auto axis = [&](const std::string& key) {
        const auto& node = spec.at(key);
        if (node.is_array()) return node.get<std::vector<double>>();
        const double from = require_number(node, "from", "regimes." + key);
        const double to = require_number(node, "to", "regimes." + key);
        const auto count = static_cast<int>(require_number(node, "count", "regimes." + key));
        if (count < 1) throw ConfigError("regimes." + key + ".count must be >= 1");
        std::vector<double> out;
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
        return out;
    };
    if (!spec.contains("lambda1") || !spec.contains("lambda6"))
        throw ConfigError("regimes needs lambda1 and lambda6 axes");

    std::ofstream out(outdir / "regimes.csv");
    out << "lambda1,lambda6,eta,mu,regime\n";
    char line[160];
    for (double l1 : axis("lambda1")) {
        for (double l6 : axis("lambda6")) {
            if (l1 == 0.0 && l6 == 0.0) continue;  // excluded pair
            const auto c = derive(l1, l6);
            if (c.mu)
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%s\n", l1, l6, c.eta,
                              *c.mu, regime_name(c.regime));
            else
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,,%s\n", l1, l6, c.eta,
                              regime_name(c.regime));
            out << line;
        }
    }
    write_manifest(outdir, "regimes", cfg, {"regimes.csv"});
    return 0;
}

// -------------------------------------------------------------- ode-check --

int cmd_ode_check(const json& cfg, const fs::path& outdir, const std::string& system_override) {
    const auto coeffs = coefficients_from(cfg);
    const auto grid = grid_from(cfg);
    const auto& run = cfg.contains("run") ? cfg.at("run") : json::object();

    std::string system = run.value("ode_system", std::string("paper"));
    if (!system_override.empty()) system = system_override;
    const auto sys = CubicSystem::from_preset(system, coeffs.lambda1, coeffs.lambda6);

    const auto data = final_data_from(cfg, grid, coeffs);
    std::vector<double> times = run.contains("ode_times")
                                    ? run.at("ode_times").get<std::vector<double>>()
                                    : std::vector<double>{2.0, 10.0, 100.0};
    const auto steps = static_cast<std::size_t>(run.value("ode_steps", 4096));
    const double tolerance = run.value("ode_tolerance", 1e-7);

    json report;
    report["system"] = system;
    report["steps"] = steps;
    bool pass = true;

    if (system == "paper") {
        if (!coeffs.deceleration())
            throw ConfigError("ode-check against the closed form needs the Deceleration regime");
        double overall = 0.0;
        json per_time = json::array();
        for (double t : times) {
            const auto f1 = eval_f1(t, data, coeffs);
            const auto f2 = eval_f2(t, data, coeffs);
            double worst = 0.0;
            for (std::size_t k = 0; k < grid->n; ++k) {
                const auto end =
                    integrate_rk4(OdeState{1.0, data.w1[k], data.w2[k]}, t, steps, sys);
                worst = std::max(worst, std::abs(end.a1 - f1[k]));
                worst = std::max(worst, std::abs(end.a2 - f2[k]));
            }
            per_time.push_back({{"t", t}, {"max_deviation", worst}});
            overall = std::max(overall, worst);
        }
        pass = overall < tolerance;
        report["per_time"] = per_time;
        report["max_deviation"] = overall;
        report["tolerance"] = tolerance;
    } else {
        // exploratory presets: no closed form, report boundedness
        double max_amp = 0.0;
        for (double t : times) {
            for (std::size_t k = 0; k < grid->n; k += 8) {
                const auto end =
                    integrate_rk4(OdeState{1.0, data.w1[k], data.w2[k]}, t, steps, sys);
                max_amp = std::max({max_amp, std::abs(end.a1), std::abs(end.a2)});
            }
        }
        pass = std::isfinite(max_amp);
        report["max_amplitude"] = max_amp;
    }
    report["pass"] = pass;

    std::ofstream out(outdir / "ode_check.json");
    out << report.dump(2) << "\n";
    write_manifest(outdir, "ode-check", cfg, {"ode_check.json"});
    if (!pass) throw CheckFailure{"ode-check exceeded its tolerance"};
    return 0;
}

// --------------------------------------------------------- identity-check --

int cmd_identity_check(const json& cfg, const fs::path& outdir, unsigned seed) {
    const auto grid = grid_from(cfg);
    const auto& run = cfg.contains("run") ? cfg.at("run") : json::object();
    const auto draws = static_cast<int>(run.value("draws", 1000));

    json report = json::array();
    bool all_pass = true;
    auto add = [&](const std::string& name, double value, double tol, bool smaller_is_pass) {
        const bool pass = smaller_is_pass ? value < tol : value <= tol;
        report.push_back(
            {{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
        all_pass = all_pass && pass;
    };

    Field f(grid, Space::physical);
    for (std::size_t j = 0; j < grid->n; ++j)
        f.values[j] = std::exp(-0.5 * grid->x[j] * grid->x[j]);

    // cft unitarity and round trip
    const Field hat = cft(f);
    add("cft_unitarity", std::abs(l2_norm(hat) - l2_norm(f)) / l2_norm(f), 1e-12, true);
    const Field back = icft(hat);
    double rt = 0.0;
    for (std::size_t j = 0; j < grid->n; ++j)
        rt = std::max(rt, std::abs(back.values[j] - f.values[j]));
    add("cft_round_trip", rt, 1e-12, true);

    // factorization U = M D F M
    for (double t : {1.0, 2.0, 10.0})
        add("factorization_t" + std::to_string(static_cast<int>(t)),
            factorization_residual(f, t), 1e-6, true);

    // chirp-conjugation residual decay rate
    {
        std::vector<double> times, residuals;
        for (double lt = 2.0; lt <= 4.01; lt += 0.25) {
            times.push_back(std::pow(10.0, lt));
            residuals.push_back(chirp_residual(f, times.back()));
        }
        const auto fit = fit_decay_rate(times, residuals, times.front() * 0.99,
                                        times.back() * 1.01);
        add("chirp_residual_slope", fit.slope, -0.20, false);
    }

    // J identity against U(t) x U(-t)
    {
        const double t = 1.9;
        Field uxu = free_propagate(f, -t);
        for (std::size_t j = 0; j < grid->n; ++j) uxu.values[j] *= grid->x[j];
        uxu = free_propagate(uxu, t);
        const Field jf = apply_J(f, t);
        double worst = 0.0;
        for (std::size_t j = 0; j < grid->n; ++j)
            worst = std::max(worst, std::abs(jf.values[j] - uxu.values[j]));
        add("j_identity", worst, 1e-8, true);
    }

    // diagonalization identities over random regime draws
    {
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> mag(0.2, 2.0);
        std::uniform_real_distribution<double> frac(0.05, 0.95);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979324);
        std::uniform_int_distribution<int> sign(0, 1);
        const auto tiny = Grid::make(4, 4.0);
        double worst_inv = 0.0, worst_diag = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double l1 = (sign(gen) ? 1.0 : -1.0) * mag(gen);
            const double l6 = l1 + frac(gen) * 2.0 * l1;
            const auto c = derive(l1, l6);
            std::vector<cplx> w1(4, 0.0), w2(4, 0.0);
            w1[0] = std::polar(mag(gen), angle(gen));
            const FinalData data(tiny, w1, w2);
            const auto d = build_diagonalizer(0, data, c);
            const auto prod = mat2_mul(d.p, d.pinv);
            worst_inv = std::max({worst_inv, std::abs(prod[0] - 1.0), std::abs(prod[1]),
                                  std::abs(prod[2]), std::abs(prod[3] - 1.0)});
            const cplx e2it = std::polar(1.0, 2.0 * d.theta);
            const Mat2 a{c.eta, -l6 * e2it, l6 * std::conj(e2it), -c.eta};
            const auto conj = mat2_mul(d.pinv, mat2_mul(a, d.p));
            const double mu = c.mu_value();
            worst_diag = std::max({worst_diag, std::abs(conj[0] - cplx{0.0, mu}),
                                   std::abs(conj[1]), std::abs(conj[2]),
                                   std::abs(conj[3] + cplx{0.0, mu})});
        }
        add("p_pinv_identity", worst_inv, 1e-10, true);
        add("p_diagonalization", worst_diag, 1e-10, true);
    }

    std::ofstream out(outdir / "identities.json");
    out << report.dump(2) << "\n";
    write_manifest(outdir, "identity-check", cfg, {"identities.json"});
    if (!all_pass) throw CheckFailure{"identity-check found a failing identity"};
    return 0;
}

// ---------------------------------------------------------------- simulate --

int cmd_simulate(const json& cfg, const fs::path& outdir) {
    const auto coeffs = coefficients_from(cfg);
    const auto grid = grid_from(cfg);
    const auto& run = require_section(cfg, "run");
    const std::string mode = run.value("mode", std::string("physical"));
    const auto formats = formats_from(cfg);

    Trajectory traj;
    if (mode == "physical") {
        auto scfg = solver_config_from(run, RunMode::physical);
        const auto& data = require_section(cfg, "data");
        if (!data.contains("initial"))
            throw ConfigError("physical simulate needs data.initial.u1/u2 generator specs");
        const auto& init = data.at("initial");
        Field u1(grid, Space::physical,
                 sample_gaussian(grid->x, gaussian_from(init.at("u1"), "data.initial.u1")));
        Field u2(grid, Space::physical,
                 sample_gaussian(grid->x, gaussian_from(init.at("u2"), "data.initial.u2")));
        traj = solve_cauchy(FieldPair(u1, u2, scfg.t0), scfg, coeffs);
    } else if (mode == "profile_frame") {
        auto scfg = solver_config_from(run, RunMode::profile_frame);
        const auto data = final_data_from(cfg, grid, coeffs);
        FieldPair v0(Field(grid, Space::frequency, data.w1),
                     Field(grid, Space::frequency, data.w2), scfg.t0);
        traj = solve_profile_frame(v0, scfg, coeffs);
    } else {
        throw ConfigError("run.mode must be \"physical\" or \"profile_frame\"");
    }

    std::vector<std::string> outputs{"trajectory.csv"};
    write_trajectory_csv(traj, (outdir / "trajectory.csv").string());
    write_snapshots(traj, outdir, formats, outputs);
    write_manifest(outdir, "simulate", cfg, outputs);
    for (const auto& note : traj.warnings.notes) std::cerr << "warning: " << note << "\n";
    return 0;
}

// ------------------------------------------------------------- final-state --

int cmd_final_state(const json& cfg, const fs::path& outdir) {
    const auto coeffs = coefficients_from(cfg);
    const auto grid = grid_from(cfg);
    const auto& run = require_section(cfg, "run");
    const auto formats = formats_from(cfg);

    const double T = require_number(run, "T", "run");
    const double T_max = require_number(run, "T_max", "run");
    const double nu = require_number(run, "nu", "run");
    const double delta = require_number(run, "delta", "run");
    if (!(nu > 0.5 && nu < 1.0))
        throw ConfigError("run.nu must lie in (1/2, 1)");
    if (!(delta > 0.0 && delta < nu - 0.5))
        throw ConfigError("run.delta must lie in (0, nu - 1/2)");

    auto scfg = solver_config_from(run, RunMode::physical);
    const auto data = final_data_from(cfg, grid, coeffs);
    const auto traj = solve_final_state(data, coeffs, T, T_max, scfg);

    std::vector<std::string> outputs{"trajectory.csv", "final_data.csv"};
    write_trajectory_csv(traj, (outdir / "trajectory.csv").string());
    write_final_data_csv(data, (outdir / "final_data.csv").string());
    write_snapshots(traj, outdir, formats, outputs);

    // bounded-ratio report for the windowed error series, scaled by the
    // configured rates t^{nu + 1/4} and t^{nu + 1/4 - delta}
    json report;
    report["T"] = T;
    report["T_max"] = T_max;
    report["nu"] = nu;
    report["delta"] = delta;
    auto ratio = [&](const std::string& q, double exponent) {
        double lo = 1e300, hi = 0.0;
        const auto series = traj.series(q);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double v = series[i] * std::pow(traj.times[i], exponent);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return json{{"quantity", q}, {"exponent", exponent},
                    {"max_over_min", lo > 0.0 ? hi / lo : 0.0}};
    };
    report["bounded_ratio"] = json::array({ratio("errlinf_1", nu + 0.25),
                                           ratio("errlinf_2", nu + 0.25 - delta),
                                           ratio("errl2_1", nu), ratio("errl2_2", nu - delta)});
    std::ofstream rep(outdir / "final_state_report.json");
    rep << report.dump(2) << "\n";
    outputs.push_back("final_state_report.json");
    write_manifest(outdir, "final-state", cfg, outputs);
    for (const auto& note : traj.warnings.notes) std::cerr << "warning: " << note << "\n";
    return 0;
}

// ------------------------------------------------------------------- rates --

int cmd_rates(const json& cfg, const fs::path& outdir) {
    const auto& spec = require_section(cfg, "rates");
    const std::string input = spec.value("input", std::string());
    if (input.empty()) throw ConfigError("rates.input (trajectory CSV path) is required");
    if (!fs::exists(input)) throw ConfigError("rates.input does not exist: " + input);
    const std::string quantity = spec.value("quantity", std::string("linf_u2"));
    if (!spec.contains("window") || !spec.at("window").is_array() ||
        spec.at("window").size() != 2)
        throw ConfigError("rates.window must be [t_lo, t_hi]");
    const double t_lo = spec.at("window").at(0).get<double>();
    const double t_hi = spec.at("window").at(1).get<double>();

    const auto traj = read_trajectory_csv(input);
    const auto fit = fit_decay_rate(traj.times, traj.series(quantity), t_lo, t_hi);

    json report;
    report["quantity"] = quantity;
    report["window"] = {t_lo, t_hi};
    report["slope"] = fit.slope;
    report["r2"] = fit.r_squared;
    report["n_points"] = fit.n_points;
    bool pass = true;
    if (spec.contains("expected")) {
        const double expected = spec.at("expected").get<double>();
        const double tolerance = spec.value("tolerance", 0.25 * std::abs(expected));
        report["expected"] = expected;
        report["tolerance"] = tolerance;
        pass = std::abs(fit.slope - expected) <= tolerance;
    } else {
        report["expected"] = nullptr;
    }
    report["pass"] = pass;

    std::ofstream out(outdir / "rates.json");
    out << report.dump(2) << "\n";
    write_manifest(outdir, "rates", cfg, {"rates.json"});
    if (!pass) throw CheckFailure{"fitted exponent missed the expected value"};
    return 0;
}

// ------------------------------------------------------------------ driver --

int run_subcommand(const std::string& name, const json& cfg, const fs::path& outdir,
                   unsigned seed, const std::string& ode_system) {
    if (name == "regimes") return cmd_regimes(cfg, outdir);
    if (name == "ode-check") return cmd_ode_check(cfg, outdir, ode_system);
    if (name == "identity-check") return cmd_identity_check(cfg, outdir, seed);
    if (name == "simulate") return cmd_simulate(cfg, outdir);
    if (name == "final-state") return cmd_final_state(cfg, outdir);
    if (name == "rates") return cmd_rates(cfg, outdir);
    throw ConfigError("unknown subcommand " + name);
}

int guarded_run(const std::string& name, const json& cfg, const fs::path& outdir, unsigned seed,
                const std::string& ode_system) {
    try {
        return run_subcommand(name, cfg, outdir, seed, ode_system);
    } catch (const CheckFailure& f) {
        print_error("CheckFailed", f.message);
        return 3;
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
        return 2;
    }
}

// "key.path=v1,v2,..." -> (json pointer, values)
std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& sweep) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--sweep expects KEY=v1,v2,...");
    std::string pointer = "/" + sweep.substr(0, eq);
    for (auto& ch : pointer)
        if (ch == '.') ch = '/';
    std::vector<std::string> values;
    std::string rest = sweep.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        values.push_back(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw ConfigError("--sweep has no values");
    return {pointer, values};
}

json apply_sweep_value(json cfg, const std::string& pointer, const std::string& value) {
    json parsed;
    try {
        parsed = json::parse(value);
        if (!parsed.is_number() && !parsed.is_boolean()) parsed = value;
    } catch (...) {
        parsed = value;
    }
    cfg[json::json_pointer(pointer)] = parsed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled cubic NLS simulation laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sweep, ode_system;
    unsigned seed = 12345;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--sweep", sweep, "fan out over KEY=v1,v2,...");
    app.add_option("--seed", seed, "seed for randomized identity draws");
    app.add_option("--ode-system", ode_system, "ODE preset: paper|new1|new2|source");

    for (const char* name : {"regimes", "ode-check", "identity-check", "simulate",
                             "final-state", "rates"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    json cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return e.exit_code();
    }

    if (sweep.empty()) {
        fs::path outdir;
        try {
            outdir = ensure_outdir(cfg, out_dir);
        } catch (const std::exception& e) {
            print_error("IoError", e.what());
            return 2;
        }
        return guarded_run(sub, cfg, outdir, seed, ode_system);
    }

    // sweep mode: independent runs across worker threads, one subdir each
    std::string pointer;
    std::vector<std::string> values;
    try {
        std::tie(pointer, values) = parse_sweep(sweep);
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
        return e.exit_code();
    }

    const fs::path base = ensure_outdir(cfg, out_dir);
    std::vector<int> codes(values.size(), 0);
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(values.size()));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) return;
                const std::string key = sweep.substr(0, sweep.find('='));
                const fs::path subdir = base / (key + "=" + values[i]);
                fs::create_directories(subdir);
                const json swept = apply_sweep_value(cfg, pointer, values[i]);
                codes[i] = guarded_run(sub, swept, subdir, seed, ode_system);
            }
        });
    }
    for (auto& th : pool) th.join();
    int worst = 0;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
}
