#include "cnls/coeffs.hpp"

#include <algorithm>
#include <cmath>

namespace cnls {

Coefficients derive(double lambda1, double lambda6) {
    if (lambda1 == 0.0 && lambda6 == 0.0)
        throw ZeroCoefficientsError();

    Coefficients c;
    c.lambda1 = lambda1;
    c.lambda6 = lambda6;
    c.eta = 3.0 * lambda1 - 2.0 * lambda6;

    const double product = (lambda6 - lambda1) * (lambda6 - 3.0 * lambda1);
    const double tol = 1e-12 * std::max(lambda1 * lambda1, lambda6 * lambda6);

    if (std::abs(product) <= tol) {
        c.regime = Regime::Threshold;
    } else if (product < 0.0) {
        c.regime = Regime::Deceleration;
        // product < 0 reads as lambda6^2 - eta^2 > 0
        c.mu = std::sqrt(lambda6 * lambda6 - c.eta * c.eta);
    } else {
        c.regime = Regime::Oscillatory;
    }
    return c;
}

const char* regime_name(Regime r) noexcept {
    switch (r) {
        case Regime::Deceleration: return "Deceleration";
        case Regime::Threshold: return "Threshold";
        case Regime::Oscillatory: return "Oscillatory";
    }
    return "unknown";
}

} // namespace cnls
