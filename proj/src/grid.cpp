#include "cnls/grid.hpp"

#include <cmath>
#include <numbers>

namespace cnls {

std::shared_ptr<const Grid> Grid::make(std::size_t n, double length) {
    if (n < 4 || (n & (n - 1)) != 0)
        throw ConfigError("grid size must be a power of two >= 4");
    if (!(length > 0.0))
        throw ConfigError("grid length must be positive");

    auto g = std::make_shared<Grid>();
    g->n = n;
    g->length = length;
    g->dx = length / static_cast<double>(n);
    g->dxi = 2.0 * std::numbers::pi / length;
    g->x.resize(n);
    g->xi.resize(n);
    const double half = 0.5 * static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        g->x[j] = (static_cast<double>(j) - half) * g->dx;
        g->xi[j] = (static_cast<double>(j) - half) * g->dxi;
    }
    return g;
}

cplx interp_cubic(const std::vector<cplx>& values, double x0, double h, double s) {
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    const double u = (s - x0) / h;
    if (u < 0.0 || u > static_cast<double>(n - 1))
        return cplx{0.0, 0.0};

    auto i1 = static_cast<std::ptrdiff_t>(std::floor(u));
    if (i1 > n - 2) i1 = n - 2;
    // 4-point stencil i1-1 .. i1+2, clamped at the ends (3-point fallback there)
    std::ptrdiff_t i0 = i1 - 1;
    std::ptrdiff_t lo = std::max<std::ptrdiff_t>(i0, 0);
    std::ptrdiff_t hi = std::min<std::ptrdiff_t>(i1 + 2, n - 1);

    cplx acc{0.0, 0.0};
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        double w = 1.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            if (k == i) continue;
            w *= (u - static_cast<double>(k)) / static_cast<double>(i - k);
        }
        acc += w * values[static_cast<std::size_t>(i)];
    }
    return acc;
}

} // namespace cnls
