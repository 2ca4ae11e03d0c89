/******************************************************************************
 * master_eq.hpp
 *
 * Time-local (convolutionless) master equation machinery:
 *  - the six time-dependent coefficients alpha_1..alpha_6,
 *  - the assembled generator (constant semigroup part plus the F/G
 *    correction functionals),
 *  - the generator extracted numerically from the propagator itself,
 *  - integration of either generator over a time grid.
 *
 * Superoperators act on vec(rho) with column-major stacking in the
 * collective basis: vec index a + 4*b holds element (a, b).
 ******************************************************************************/
#pragma once

#include <array>
#include <span>

#include "qed2q/evolution.hpp"

namespace qed2q {

using SuperOp = Eigen::Matrix<cplx, 16, 16>;

struct AlphaCoefficients {
    double t = 0.0;
    std::array<cplx, 6> alpha{};  ///< alpha[0] = alpha_1, ... alpha[5] = alpha_6
};

/// Evaluates alpha_1..alpha_6.  The coefficients contain counter-exponentials
/// growing like e^{4 gamma0 t}; beyond gamma0*t = horizon the evaluation
/// would lose all significance, so a std::range_error is thrown.
AlphaCoefficients alpha_coefficients(const Rates& rt, const SystemParams& p,
                                     double t, double horizon_gamma0_t = 30.0);

/// Constant semigroup generator (the alpha-independent part; what remains
/// when F = G = 0): Hamiltonian commutator with the dipole-dipole shift plus
/// the two-site dissipator with rates gamma0/gamma_r.
SuperOp semigroup_generator(const Rates& rt, double omega0);

/// F_t / G_t correction functionals as superoperators for given alphas.
SuperOp correction_f(const AlphaCoefficients& a);
SuperOp correction_g(const AlphaCoefficients& a);

/// Full assembled generator:
///   L = semigroup + (gamma0+gamma_r) F_t + (gamma0-gamma_r) G_t
SuperOp assembled_generator(const Rates& rt, const SystemParams& p, double t,
                            double horizon_gamma0_t = 30.0);

/// Action of the assembled generator on a state; returns d(rho)/dt in the
/// basis of the input.  No validity check is applied to the result (it is a
/// derivative, not a state).
DensityMatrix4 apply_lindblad_like(const DensityMatrix4& rho, const Rates& rt,
                                   const SystemParams& p,
                                   const AlphaCoefficients& a);

/// 16x16 matrix representation of the propagator map at time t.
SuperOp propagator_matrix(const SystemParams& p, const Rates& rt, double t,
                          KappaSource source = KappaSource::closed_form);

struct GeneratorMatrix {
    double t = 0.0;
    SuperOp g;
    double condition_estimate = 0.0;  ///< ||M||_1 ||M^-1||_1
};

/// Generator G(t) = dM/dt * M^-1 via central differencing of the propagator
/// matrix (one-sided at t = 0).  Throws std::range_error when the propagator
/// matrix is too ill-conditioned to invert meaningfully.
GeneratorMatrix generator_from_propagator(const SystemParams& p, double t,
                                          double fd_dt = -1.0,
                                          double cond_limit = 1e12);

enum class GeneratorSource { assembled_alphas, propagator_derived };

/// Integrates d vec(rho)/dt = L(t) vec(rho) over the grid with an adaptive
/// embedded RK5(4) scheme.  Samples are returned in the basis of rho0.
Trajectory integrate_master(const DensityMatrix4& rho0, const SystemParams& p,
                            std::span<const double> tgrid,
                            GeneratorSource source, double rel_tol = 1e-9,
                            double fd_dt = -1.0);

}  // namespace qed2q
