#include "cnls/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cnls {

FinalData::FinalData(GridPtr g, std::vector<cplx> w1_, std::vector<cplx> w2_)
    : grid(std::move(g)), w1(std::move(w1_)), w2(std::move(w2_)) {
    if (w1.size() != grid->n || w2.size() != grid->n)
        throw GridMismatchError("final data length != grid size");
}

double FinalData::max_abs_w1() const {
    double m = 0.0;
    for (const auto& z : w1) m = std::max(m, std::abs(z));
    return m;
}

double FinalData::max_abs_w2() const {
    double m = 0.0;
    for (const auto& z : w2) m = std::max(m, std::abs(z));
    return m;
}

std::vector<cplx> sample_gaussian(const std::vector<double>& nodes, const GaussianSpec& spec) {
    std::vector<cplx> out(nodes.size());
    const cplx phase = std::polar(1.0, spec.phase);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double d = nodes[k] - spec.center;
        out[k] = spec.amplitude * std::exp(-d * d / (spec.sigma * spec.sigma)) * phase;
    }
    return out;
}

FinalData make_gaussian_final_data(const GridPtr& grid, const GaussianSpec& w1,
                                   const GaussianSpec& w2) {
    return FinalData(grid, sample_gaussian(grid->xi, w1), sample_gaussian(grid->xi, w2));
}

void write_final_data_csv(const FinalData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "xi,re_W1,im_W1,re_W2,im_W2\n";
    char line[160];
    for (std::size_t k = 0; k < data.grid->n; ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", data.grid->xi[k],
                      data.w1[k].real(), data.w1[k].imag(), data.w2[k].real(), data.w2[k].imag());
        out << line;
    }
}

FinalData read_final_data_csv(const GridPtr& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("xi,", 0) != 0)
        throw IoError("bad final-data CSV header in " + path);
    std::vector<cplx> w1, w2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double xi, a, b, c, d;
        char comma;
        if (!(ss >> xi >> comma >> a >> comma >> b >> comma >> c >> comma >> d))
            throw IoError("bad final-data CSV row in " + path);
        w1.emplace_back(a, b);
        w2.emplace_back(c, d);
    }
    if (w1.size() != grid->n)
        throw GridMismatchError("final-data CSV row count != grid size");
    return FinalData(grid, std::move(w1), std::move(w2));
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return Mat2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

std::array<cplx, 2> mat2_apply(const Mat2& m, const std::array<cplx, 2>& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

Diagonalizer build_diagonalizer(std::size_t xi_index, const FinalData& data,
                                const Coefficients& coeffs) {
    if (!coeffs.deceleration())
        throw WrongRegimeError("diagonalizer defined in the Deceleration regime only");
    if (xi_index >= data.grid->n) throw GridMismatchError("xi index out of range");

    const cplx w1 = data.w1[xi_index];
    const double mag = std::abs(w1);
    if (mag <= 1e-300 || mag < 1e-10 * data.max_abs_w1())
        throw ZeroAmplitudeError("|W1| below tolerance at the requested node");

    const double mu = coeffs.mu_value();
    const double eta = coeffs.eta;
    const double l6 = coeffs.lambda6;
    const double theta = std::arg(w1);
    const cplx e2it = std::polar(1.0, 2.0 * theta);
    const cplx e2it_c = std::conj(e2it);
    const cplx em = cplx{eta, -mu};  // eta - i mu

    Diagonalizer d;
    d.theta = theta;
    d.w1sq = mag * mag;
    d.p = Mat2{l6 * e2it, em, em, l6 * e2it_c};
    const cplx det_inv = 1.0 / (cplx{0.0, 2.0 * mu} * em);  // 1 / (2 i mu (eta - i mu))
    d.pinv = Mat2{det_inv * l6 * e2it_c, -det_inv * em, -det_inv * em, det_inv * l6 * e2it};
    return d;
}

Mat2 q_matrix(double t, double mu, double w1sq) {
    const double e = mu * w1sq;
    return Mat2{std::pow(t, -e), 0.0, 0.0, std::pow(t, e)};
}

cplx evolve_w_leading(cplx w0, double t0, double t1, const Diagonalizer& diag,
                      const Coefficients& coeffs) {
    if (diag.w1sq == 0.0) return w0;  // P Q P^{-1} = I convention on the W1 = 0 branch
    const Mat2 q = q_matrix(t1 / t0, coeffs.mu_value(), diag.w1sq);
    const auto v = mat2_apply(diag.p, mat2_apply(q, mat2_apply(diag.pinv, {w0, std::conj(w0)})));
    return v[0];
}

std::vector<cplx> eval_f1(double t, const FinalData& data, const Coefficients& coeffs) {
    const double lt = std::log(t);
    std::vector<cplx> out(data.grid->n);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const cplx w = data.w1[k];
        out[k] = w * std::polar(1.0, -3.0 * coeffs.lambda1 * std::norm(w) * lt);
    }
    return out;
}

std::vector<cplx> eval_w2tilde(double t, const FinalData& data, const Coefficients& coeffs,
                               double zero_tol) {
    if (!coeffs.deceleration())
        throw WrongRegimeError("modified amplitude defined in the Deceleration regime only");
    const double mu = coeffs.mu_value();
    const double eta = coeffs.eta;
    const double l6 = coeffs.lambda6;
    const double cutoff = zero_tol * data.max_abs_w1();
    const double lt = std::log(t);

    std::vector<cplx> out(data.grid->n);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const cplx w1 = data.w1[k];
        const cplx w2 = data.w2[k];
        const double mag = std::abs(w1);
        if (mag <= cutoff) {
            out[k] = w2;  // the 0/0 closed form has this finite limit
            continue;
        }
        const cplx e2it = (w1 * w1) / (mag * mag);
        const cplx w2c = std::conj(w2);
        const cplx minus = (cplx{mu, -eta} * w2 + cplx{0.0, l6} * e2it * w2c) / (2.0 * mu);
        const cplx plus = (cplx{mu, eta} * w2 - cplx{0.0, l6} * e2it * w2c) / (2.0 * mu);
        const double e = mu * mag * mag * lt;
        out[k] = minus * std::exp(-e) + plus * std::exp(e);
    }
    return out;
}

std::vector<cplx> eval_f2(double t, const FinalData& data, const Coefficients& coeffs,
                          double zero_tol) {
    auto out = eval_w2tilde(t, data, coeffs, zero_tol);
    const double lt = std::log(t);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] *= std::polar(1.0, -3.0 * coeffs.lambda1 * std::norm(data.w1[k]) * lt);
    return out;
}

Field sample_uap(double t, int j, const FinalData& data, const Coefficients& coeffs,
                 const GridPtr& grid, Warnings* warn, double mass_tol) {
    if (j != 1 && j != 2) throw ConfigError("profile index must be 1 or 2");
    if (!(t >= 1.0)) throw ConfigError("sample_uap requires t >= 1");

    const auto profile = (j == 1) ? eval_f1(t, data, coeffs) : eval_f2(t, data, coeffs);

    if (warn) {
        const auto& w = (j == 1) ? data.w1 : data.w2;
        const double window = 0.5 * grid->length / t;
        double total = 0.0, outside = 0.0;
        for (std::size_t k = 0; k < data.grid->n; ++k) {
            const double m = std::norm(w[k]);
            total += m;
            if (std::abs(data.grid->xi[k]) > window) outside += m;
        }
        if (total > 0.0 && outside / total > mass_tol)
            warn->add("sample_uap: grid window |x| <= L/2 misses " +
                      std::to_string(outside / total) + " of the profile mass at t = " +
                      std::to_string(t));
    }

    const double amp = 1.0 / std::sqrt(t);
    const double xi0 = data.grid->xi.front();
    const double dxi = data.grid->dxi;
    Field out(grid, Space::physical);
    for (std::size_t i = 0; i < grid->n; ++i) {
        const double x = grid->x[i];
        const cplx f = interp_cubic(profile, xi0, dxi, x / t);
        out.values[i] =
            amp * f * std::polar(1.0, x * x / (2.0 * t) - 0.25 * std::numbers::pi);
    }
    return out;
}

} // namespace cnls
