#include "cnls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace cnls {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

// Shared plan cache. Plans are created FFTW_ESTIMATE | FFTW_UNALIGNED so they
// can execute on any caller buffer via the new-array interface (thread-safe);
// only plan creation needs the lock.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

void dft_inplace(std::vector<cplx>& data, int sign) {
    fftw_plan plan = plan_for(data.size(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

void require(bool cond, const char* msg) {
    if (!cond) throw GridMismatchError(msg);
}

// cft on raw samples: x-ordered input -> centered xi-ordered output.
std::vector<cplx> cft_values(const GridPtr& g, std::vector<cplx> v) {
    const std::size_t n = g->n;
    dft_inplace(v, FFTW_FORWARD);
    std::vector<cplx> out(n);
    const double scale = g->dx / kSqrt2Pi;
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        // centered index m = k - n/2; fft slot m mod n; offset phase is (-1)^m
        const std::size_t m = (k + half) & (n - 1);
        const double parity = (k & 1) ? -scale : scale;  // (k - n/2) even iff k even
        out[k] = parity * v[m];
    }
    return out;
}

std::vector<cplx> icft_values(const GridPtr& g, const std::vector<cplx>& v) {
    const std::size_t n = g->n;
    std::vector<cplx> tmp(n);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = (k + half) & (n - 1);
        tmp[m] = (k & 1) ? -v[k] : v[k];
    }
    dft_inplace(tmp, FFTW_BACKWARD);
    const double scale = kSqrt2Pi / g->length;
    for (auto& z : tmp) z *= scale;
    return tmp;
}

} // namespace

Field cft(const Field& f) {
    require(f.space == Space::physical, "cft expects a physical-space field");
    return Field(f.grid, Space::frequency, cft_values(f.grid, f.values));
}

Field icft(const Field& f) {
    require(f.space == Space::frequency, "icft expects a frequency-space field");
    return Field(f.grid, Space::physical, icft_values(f.grid, f.values));
}

Field free_propagate(const Field& f, double t) {
    if (t == 0.0) return f;
    const auto& xi = f.grid->xi;
    if (f.space == Space::frequency) {
        Field out = f;
        for (std::size_t k = 0; k < out.size(); ++k)
            out.values[k] *= std::polar(1.0, -0.5 * t * xi[k] * xi[k]);
        return out;
    }
    auto hat = cft_values(f.grid, f.values);
    for (std::size_t k = 0; k < hat.size(); ++k)
        hat[k] *= std::polar(1.0, -0.5 * t * xi[k] * xi[k]);
    return Field(f.grid, Space::physical, icft_values(f.grid, hat));
}

namespace {

Field apply_chirp(const Field& f, double t, double sign) {
    if (t == 0.0) throw ZeroTimeError();
    Field out = f;
    const auto& x = f.grid->x;
    for (std::size_t j = 0; j < out.size(); ++j)
        out.values[j] *= std::polar(1.0, sign * x[j] * x[j] / (2.0 * t));
    return out;
}

} // namespace

Field apply_M(const Field& f, double t) { return apply_chirp(f, t, +1.0); }
Field apply_Minv(const Field& f, double t) { return apply_chirp(f, t, -1.0); }

Field apply_D(const Field& f, double t, Warnings* warn, double mass_tol) {
    if (!(t > 0.0)) throw ZeroTimeError("dilation defined for t > 0");
    const auto& g = *f.grid;
    const std::vector<double>& nodes = (f.space == Space::frequency) ? g.xi : g.x;
    const double h = (f.space == Space::frequency) ? g.dxi : g.dx;
    const double node0 = nodes.front();

    if (warn) {
        // mass of f outside the window reachable from the x grid, |s| <= L/(2t)
        const double window = 0.5 * g.length / t;
        double total = 0.0, outside = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double m = std::norm(f.values[k]);
            total += m;
            if (std::abs(nodes[k]) > window) outside += m;
        }
        if (total > 0.0 && outside / total > mass_tol)
            warn->add("apply_D: " + std::to_string(outside / total) +
                      " of the input mass lies outside the dilated window");
    }

    const double amp = 1.0 / std::sqrt(t);
    const cplx phase = std::polar(amp, -0.25 * std::numbers::pi);
    Field out(f.grid, Space::physical);
    for (std::size_t j = 0; j < g.n; ++j)
        out.values[j] = phase * interp_cubic(f.values, node0, h, g.x[j] / t);
    return out;
}

Field spectral_dx(const Field& f) {
    require(f.space == Space::physical, "spectral_dx expects a physical-space field");
    auto hat = cft_values(f.grid, f.values);
    const auto& xi = f.grid->xi;
    hat[0] = 0.0;  // unpaired Nyquist mode
    for (std::size_t k = 1; k < hat.size(); ++k)
        hat[k] *= cplx{0.0, xi[k]};
    return Field(f.grid, Space::physical, icft_values(f.grid, hat));
}

Field apply_J(const Field& f, double t) {
    require(f.space == Space::physical, "apply_J expects a physical-space field");
    Field out(f.grid, Space::physical);
    const auto& x = f.grid->x;
    if (t == 0.0) {
        for (std::size_t j = 0; j < f.size(); ++j)
            out.values[j] = x[j] * f.values[j];
        return out;
    }
    Field dx = spectral_dx(f);
    const cplx it{0.0, t};
    for (std::size_t j = 0; j < f.size(); ++j)
        out.values[j] = x[j] * f.values[j] + it * dx.values[j];
    return out;
}

std::vector<cplx> xi_derivative(const GridPtr& grid, const std::vector<cplx>& values) {
    auto phys = icft_values(grid, values);
    const auto& x = grid->x;
    phys[0] = 0.0;  // x = -L/2 endpoint, unpaired like the Nyquist mode
    for (std::size_t j = 1; j < phys.size(); ++j)
        phys[j] *= cplx{0.0, -x[j]};
    return cft_values(grid, std::move(phys));
}

double factorization_residual(const Field& f, double t, Warnings* warn) {
    Field lhs = free_propagate(f, t);
    Field rhs = apply_M(apply_D(cft(apply_M(f, t)), t, warn), t);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        num += std::norm(lhs.values[j] - rhs.values[j]);
        den += std::norm(f.values[j]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double chirp_residual(const Field& f, double t) {
    if (t == 0.0) throw ZeroTimeError();
    auto sandwich = fmf_inv(f.grid, f.values, t);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        worst = std::max(worst, std::abs(sandwich[k] - f.values[k]));
    return worst;
}

std::vector<cplx> fmf_inv(const GridPtr& grid, const std::vector<cplx>& values, double t) {
    auto phys = icft_values(grid, values);
    const auto& x = grid->x;
    for (std::size_t j = 0; j < phys.size(); ++j)
        phys[j] *= std::polar(1.0, x[j] * x[j] / (2.0 * t));
    return cft_values(grid, std::move(phys));
}

std::vector<cplx> f_minv_finv(const GridPtr& grid, const std::vector<cplx>& values, double t) {
    auto phys = icft_values(grid, values);
    const auto& x = grid->x;
    for (std::size_t j = 0; j < phys.size(); ++j)
        phys[j] *= std::polar(1.0, -x[j] * x[j] / (2.0 * t));
    return cft_values(grid, std::move(phys));
}

std::vector<cplx> f_mminus1_finv(const GridPtr& grid, const std::vector<cplx>& values, double t) {
    auto phys = icft_values(grid, values);
    const auto& x = grid->x;
    for (std::size_t j = 0; j < phys.size(); ++j)
        phys[j] *= std::polar(1.0, x[j] * x[j] / (2.0 * t)) - 1.0;
    return cft_values(grid, std::move(phys));
}

double l2_norm(const Field& f) {
    const double h = (f.space == Space::physical) ? f.grid->dx : f.grid->dxi;
    double acc = 0.0;
    for (const auto& z : f.values) acc += std::norm(z);
    return std::sqrt(h * acc);
}

double linf_norm(const Field& f) {
    double worst = 0.0;
    for (const auto& z : f.values) worst = std::max(worst, std::abs(z));
    return worst;
}

Norms norms(const Field& f, double t_context) {
    require(f.space == Space::physical, "norms expects a physical-space field");
    Norms out;
    out.l2 = l2_norm(f);
    out.linf = linf_norm(f);

    auto hat = cft_values(f.grid, f.values);
    const auto& xi = f.grid->xi;
    double h1 = 0.0;
    for (std::size_t k = 0; k < hat.size(); ++k)
        h1 += (1.0 + xi[k] * xi[k]) * std::norm(hat[k]);
    out.h1 = std::sqrt(f.grid->dxi * h1);

    const auto& x = f.grid->x;
    double h01 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        h01 += (1.0 + x[j] * x[j]) * std::norm(f.values[j]);
    out.h01 = std::sqrt(f.grid->dx * h01);

    out.j_norm = l2_norm(apply_J(f, t_context));
    return out;
}

} // namespace cnls
