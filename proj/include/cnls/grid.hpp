#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "cnls/errors.hpp"

namespace cnls {

using cplx = std::complex<double>;

enum class Space { physical, frequency };

// Uniform periodic grid on [-L/2, L/2) with the matching centered frequency
// grid xi_k = 2*pi*(k - n/2)/L, k = 0..n-1 (monotone; the k = 0 slot is the
// unpaired Nyquist frequency -pi*n/L).
struct Grid {
    std::size_t n = 0;
    double length = 0.0;
    double dx = 0.0;
    double dxi = 0.0;
    std::vector<double> x;
    std::vector<double> xi;

    static std::shared_ptr<const Grid> make(std::size_t n, double length);
};

using GridPtr = std::shared_ptr<const Grid>;

// Complex samples on a grid, tagged with the space they live in. Physical
// fields are sampled at x nodes, frequency fields at xi nodes.
struct Field {
    GridPtr grid;
    Space space = Space::physical;
    std::vector<cplx> values;

    Field() = default;
    Field(GridPtr g, Space s) : grid(std::move(g)), space(s), values(grid->n, cplx{0.0, 0.0}) {}
    Field(GridPtr g, Space s, std::vector<cplx> v)
        : grid(std::move(g)), space(s), values(std::move(v)) {
        if (values.size() != grid->n) throw GridMismatchError("field length != grid size");
    }

    std::size_t size() const noexcept { return values.size(); }
};

// Cubic (4-point Lagrange) interpolation of uniformly sampled values at
// coordinate `s`; nodes are at x0 + i*h. Returns 0 outside the sampled range.
cplx interp_cubic(const std::vector<cplx>& values, double x0, double h, double s);

} // namespace cnls
