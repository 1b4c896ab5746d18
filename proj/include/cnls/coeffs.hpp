#pragma once

#include <optional>

#include "cnls/errors.hpp"

namespace cnls {

// Coefficient regimes of the coupled cubic system, classified by the sign of
// (lambda6 - lambda1)(lambda6 - 3*lambda1):
//   < 0  Deceleration : the second component decays polynomially slower than t^{-1/2}
//   = 0  Threshold    : logarithmic amplitude correction (not evaluated here)
//   > 0  Oscillatory  : no amplification, two distinct oscillating parts
enum class Regime { Deceleration, Threshold, Oscillatory };

struct Coefficients {
    double lambda1 = 0.0;
    double lambda6 = 0.0;
    double eta = 0.0;              // 3*lambda1 - 2*lambda6
    std::optional<double> mu;      // sqrt(lambda6^2 - eta^2), Deceleration regime only
    Regime regime = Regime::Oscillatory;

    bool deceleration() const noexcept { return regime == Regime::Deceleration; }

    // mu as a plain double; throws WrongRegime outside the Deceleration regime.
    double mu_value() const {
        if (!mu) throw WrongRegimeError("mu is defined only in the Deceleration regime");
        return *mu;
    }
};

// Classify a coupling pair. Throws ZeroCoefficients when both vanish.
// The regime product is compared against a relative tolerance
// 1e-12 * max(lambda1^2, lambda6^2) so near-threshold inputs classify as
// Threshold instead of flipping on rounding noise.
Coefficients derive(double lambda1, double lambda6);

const char* regime_name(Regime r) noexcept;

} // namespace cnls
