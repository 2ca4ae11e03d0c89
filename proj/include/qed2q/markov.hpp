/******************************************************************************
 * markov.hpp
 *
 * Semigroup (constant-rate) reference dynamics: closed-form collective
 * population cascade, and full Lindblad integration with the constant
 * generator.  Used as the memoryless baseline against the resummed
 * propagator.
 ******************************************************************************/
#pragma once

#include <span>

#include "qed2q/evolution.hpp"

namespace qed2q {

/// Collective-basis populations.
struct MarkovPopulations {
    double p_ii = 0.0;     ///< |I><I|
    double p_plus = 0.0;   ///< |+><+|
    double p_minus = 0.0;  ///< |-><-|
    double p_oo = 0.0;     ///< |O><O|
};

/// Closed-form solution of the population cascade
///   dp_I/dt  = -4 gamma0 p_I
///   dp_+-/dt = -2(gamma0 +- gamma_r) p_+-  +  2(gamma0 +- gamma_r) p_I
/// with p_O fixed by conservation of the input total.  Throws
/// std::domain_error for negative inputs or totals above 1.
MarkovPopulations transfer_matrix_evolve(const Rates& rt,
                                         const MarkovPopulations& p0,
                                         double t);

/// Doubly-excited initial state of weight p: the standard two-emitter
/// cascade populations at time t (identical to transfer_matrix_evolve with
/// p_ii = p).
MarkovPopulations cascade_from_doubly_excited(const Rates& rt, double p,
                                              double t);

/// Integrates the constant-generator Lindblad equation over the grid.
Trajectory lindblad_integrate(const DensityMatrix4& rho0,
                              const SystemParams& p,
                              std::span<const double> tgrid,
                              double rel_tol = 1e-9);

}  // namespace qed2q
