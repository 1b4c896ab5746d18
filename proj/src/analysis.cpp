#include "cnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cnls {

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double t_lo, double t_hi) {
    if (times.size() != values.size())
        throw GridMismatchError("times/values length mismatch");
    if (!(t_lo < t_hi)) throw ConfigError("fit window needs t_lo < t_hi");

    std::vector<double> lt, lv;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0))
            throw NonPositiveValueError("non-positive value inside the fit window at t = " +
                                        std::to_string(times[i]));
        lt.push_back(std::log(times[i]));
        lv.push_back(std::log(values[i]));
    }
    if (lt.size() < 8)
        throw InsufficientDataError("need >= 8 samples in [" + std::to_string(t_lo) + ", " +
                                    std::to_string(t_hi) + "], got " + std::to_string(lt.size()));

    const auto n = static_cast<double>(lt.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        sx += lt[i];
        sy += lv[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        const double dx = lt[i] - mx, dy = lv[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        const double r = lv[i] - (fit.intercept + fit.slope * lt[i]);
        ss_res += r * r;
    }
    fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.n_points = lt.size();
    return fit;
}

ScatteringData extract_scattering(const Trajectory& trajectory, const Coefficients& coeffs) {
    // snapshots before t = 1 (a forward run usually records its start) are skipped
    std::vector<const FieldPair*> snaps;
    for (const auto& s : trajectory.snapshots)
        if (s.t >= 1.0 - 1e-12) snaps.push_back(&s);
    if (snaps.size() < 16)
        throw InsufficientDataError("scattering extraction needs >= 16 snapshots at t >= 1, got " +
                                    std::to_string(snaps.size()));
    for (std::size_t i = 1; i < snaps.size(); ++i)
        if (!(snaps[i]->t > snaps[i - 1]->t))
            throw ConfigError("scattering snapshots must be time-ordered");

    const GridPtr grid = snaps.front()->u1.grid;
    const std::size_t n = grid->n;
    const double l1 = coeffs.lambda1;

    ScatteringData out;
    out.times.reserve(snaps.size());
    out.alpha_series.reserve(snaps.size());

    // v1 = F U(-t) u1(t); Phi1 = int_1^t |v1|^2 dtau/tau accumulated by the
    // trapezoid rule in log tau between stored snapshots.
    std::vector<double> phi1(n, 0.0);
    std::vector<double> phi1_prev(n, 0.0);
    std::vector<double> prev_sq(n, 0.0);
    double prev_log_t = 0.0;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const double t = snaps[i]->t;
        const Field v1_field = cft(free_propagate(snaps[i]->u1, -t));
        const auto& v1 = v1_field.values;
        const double log_t = std::log(t);
        phi1_prev = phi1;
        if (i == 0) {
            if (std::abs(log_t) > 1e-12) {
                // first snapshot beyond t = 1: cover [1, t0] with the value
                // frozen (|v1| drifts slowly in log time)
                for (std::size_t k = 0; k < n; ++k) phi1[k] = std::norm(v1[k]) * log_t;
            }
        } else {
            const double h = log_t - prev_log_t;
            for (std::size_t k = 0; k < n; ++k)
                phi1[k] += 0.5 * h * (prev_sq[k] + std::norm(v1[k]));
        }
        for (std::size_t k = 0; k < n; ++k) prev_sq[k] = std::norm(v1[k]);
        prev_log_t = log_t;

        std::vector<cplx> alpha_t(n);
        for (std::size_t k = 0; k < n; ++k)
            alpha_t[k] = std::polar(1.0, 3.0 * l1 * phi1[k]) * v1[k];
        out.times.push_back(t);
        out.alpha_series.push_back(std::move(alpha_t));
    }

    out.alpha = out.alpha_series.back();
    out.phi1_final = phi1;

    // theta1 = lim (Phi1 - |alpha|^2 log t), averaged over the last two snapshots.
    const std::size_t last = snaps.size() - 1;
    out.theta1.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double aa = std::norm(out.alpha[k]);
        const double d_last = phi1[k] - aa * std::log(out.times[last]);
        const double d_prev = phi1_prev[k] - aa * std::log(out.times[last - 1]);
        out.theta1[k] = 0.5 * (d_last + d_prev);
    }

    out.w1_est.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.w1_est[k] = std::polar(1.0, -3.0 * l1 * out.theta1[k]) * out.alpha[k];
    return out;
}

ProfileErrorSeries profile_error(const Trajectory& trajectory, const FinalData& data,
                                 const Coefficients& coeffs) {
    const auto& snaps = trajectory.snapshots;
    if (snaps.empty()) throw InsufficientDataError("trajectory carries no snapshots");

    ProfileErrorSeries out;
    for (const auto& s : snaps) {
        if (s.u1.grid != data.grid)
            throw GridMismatchError("snapshot grid differs from the final-data grid");
        const Field ap1 = sample_uap(s.t, 1, data, coeffs, s.u1.grid);
        const Field ap2 = sample_uap(s.t, 2, data, coeffs, s.u1.grid);
        Field d1(s.u1.grid, Space::physical);
        Field d2(s.u1.grid, Space::physical);
        for (std::size_t i = 0; i < s.u1.size(); ++i) {
            d1.values[i] = s.u1.values[i] - ap1.values[i];
            d2.values[i] = s.u2.values[i] - ap2.values[i];
        }
        out.times.push_back(s.t);
        out.errl2_1.push_back(l2_norm(d1));
        out.errlinf_1.push_back(linf_norm(d1));
        out.errl2_2.push_back(l2_norm(d2));
        out.errlinf_2.push_back(linf_norm(d2));
    }
    return out;
}

FinalData make_vanishing_data(const GridPtr& grid, const std::vector<double>& w1,
                              const std::vector<double>& r, const Coefficients& coeffs) {
    if (!coeffs.deceleration())
        throw WrongRegimeError("vanishing data requires the Deceleration regime");
    if (w1.size() != grid->n || r.size() != grid->n)
        throw GridMismatchError("vanishing data length != grid size");

    const double mu = coeffs.mu_value();
    const double eta = coeffs.eta;
    const double l6 = coeffs.lambda6;
    const cplx mu_ieta{mu, eta};

    std::vector<cplx> w1c(grid->n), w2(grid->n);
    for (std::size_t k = 0; k < grid->n; ++k) {
        w1c[k] = cplx{w1[k], 0.0};
        // (mu + i eta) W2 = i l6 e^{2i theta} conj(W2); real W1 gives e^{2i theta} = 1
        // and W2 = r e^{i psi} with e^{2i psi} = i l6 / (mu + i eta) (unit modulus).
        const double psi = 0.5 * std::arg(cplx{0.0, l6} / mu_ieta);
        w2[k] = r[k] * std::polar(1.0, psi);
    }
    return FinalData(grid, std::move(w1c), std::move(w2));
}

std::vector<bool> check_nonvanishing(const FinalData& data, const Coefficients& coeffs) {
    if (!coeffs.deceleration())
        throw WrongRegimeError("nonvanishing check requires the Deceleration regime");
    const double mu = coeffs.mu_value();
    const double eta = coeffs.eta;
    const double l6 = coeffs.lambda6;

    std::vector<bool> mask(data.grid->n, false);
    for (std::size_t k = 0; k < data.grid->n; ++k) {
        const cplx w1 = data.w1[k];
        const double mag = std::abs(w1);
        if (mag == 0.0) continue;
        const cplx e2it = (w1 * w1) / (mag * mag);
        const cplx expr = cplx{mu, eta} * data.w2[k] -
                          cplx{0.0, l6} * e2it * std::conj(data.w2[k]);
        mask[k] = std::abs(expr) > 1e-10 * (std::abs(data.w2[k]) + 1.0);
    }
    return mask;
}

} // namespace cnls
