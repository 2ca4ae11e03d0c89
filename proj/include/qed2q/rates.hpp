/******************************************************************************
 * rates.hpp
 *
 * System parameters and the collective decay/shift rates of two identical
 * two-level emitters coupled to a shared vacuum field (units: hbar = c = 1).
 ******************************************************************************/
#pragma once

#include <stdexcept>

namespace qed2q {

/// Physical inputs.  `lambda` is the dimensionless coupling, `omega0` the
/// emitter transition frequency, `r` the emitter separation.
struct SystemParams {
    double lambda = 0.1;
    double omega0 = 1.0;
    double r = 1.0;

    /// Weak-coupling regime check (perturbative resummation validity).
    bool weak_coupling_ok() const { return lambda * lambda < 0.1; }
    /// Rotating-wave / retardation consistency check.
    bool retardation_ok() const { return lambda * lambda * omega0 * r < 1.0; }

    /// Throws std::domain_error on non-physical inputs.
    void validate() const;
};

/// Collective rates: single-emitter decay gamma0, cross-damping gamma_r,
/// and the coherent dipole-dipole shift sigma.
struct Rates {
    double gamma0 = 0.0;
    double gamma_r = 0.0;
    double sigma = 0.0;
};

/// Computes all three rates from the parameters.
/// gamma0  = lambda^2 omega0 / (2 pi)
/// gamma_r = lambda^2 sin(omega0 r) / (2 pi r)   (-> gamma0 as r -> 0)
/// sigma   = lambda^2/(2 pi^2 r) [ -cos(omega0 r)(pi/2 - Si(omega0 r))
///           + sin(omega0 r)(ln(e^gamma omega0 r) + Cin(omega0 r)) ]
/// sigma diverges logarithmically at r = 0; r must be strictly positive.
Rates compute_rates(const SystemParams& p);

/// Same decay rates but with the shift pinned to a caller-supplied value
/// (useful for probing shift-free limits).
Rates rates_with_sigma_override(const SystemParams& p, double sigma);

}  // namespace qed2q
