/******************************************************************************
 * kernel.hpp
 *
 * Time-dependent coefficient functions of the resummed weak-coupling
 * propagator: single/two-excitation amplitudes u, v+-, the double-decay
 * feeding terms kappa1/kappa2 (closed form and exact mode-sum quadrature),
 * and the one-excitation feeding amplitudes mu1/mu2.
 ******************************************************************************/
#pragma once

#include <complex>

#include "qed2q/rates.hpp"

namespace qed2q {

using cplx = std::complex<double>;

/// Decaying single-excitation channel amplitudes.
/// The subradiant (antisymmetric) channel oscillates at omega0 + sigma and
/// decays at gamma0 - gamma_r; the superradiant (symmetric) channel
/// oscillates at omega0 - sigma and decays at gamma0 + gamma_r.  This pairing
/// keeps the evolved state positive and matches the semigroup limit.
cplx sub_channel_amplitude(const Rates& rt, double omega0, double t);
cplx super_channel_amplitude(const Rates& rt, double omega0, double t);

/// u, v+, v- evaluated at time t >= 0.
/// u    = e^{-2 i omega0 t - 2 gamma0 t}          (double-excitation amplitude)
/// v+-  = (super +- sub)/2                        (same-site / cross-site)
struct UV {
    cplx u{1.0, 0.0};
    cplx v_plus{1.0, 0.0};
    cplx v_minus{0.0, 0.0};
};
UV eval_u_v(const Rates& rt, double omega0, double t);

struct KappaPair {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
};

/// Shared closed-form factor kappa(t) with a series branch when
/// gamma0 ~ gamma_r, and its analytic time derivative.
double kappa_base(const Rates& rt, double t);
double kappa_base_dot(const Rates& rt, double t);

/// Closed-form kappa1 = gamma0 kappa, kappa2 = gamma_r kappa.
KappaPair eval_kappa_closed(const Rates& rt, double t);

struct KappaExactOptions {
    double k_max = -1.0;        ///< mode cutoff; defaults to 50*omega0 (>= 20*omega0 required)
    double rel_tol = 1e-6;      ///< target relative quadrature tolerance
    bool doubling_check = true; ///< re-integrate with 2*k_max and compare
    double doubling_tol = 1e-3; ///< accepted relative drift under cutoff doubling
};

/// Exact single-time mode-sum integrals for kappa1/kappa2 (no pole
/// approximation).  Adaptive quadrature; throws std::runtime_error when the
/// requested tolerance or the cutoff-doubling check cannot be met, and
/// std::domain_error for invalid options.
KappaPair eval_kappa_exact(const SystemParams& p, const Rates& rt, double t,
                           const KappaExactOptions& opt = {});

/// m(t) = mu + i nu: the one-excitation coherence feeding amplitude, and its
/// analytic time derivative.  s = sin(omega0 r)/(omega0 r).
cplx munu(const Rates& rt, const SystemParams& p, double t);
cplx munu_dot(const Rates& rt, const SystemParams& p, double t);

struct MuPair {
    cplx mu1{0.0, 0.0};  ///< gamma0  * m(t)
    cplx mu2{0.0, 0.0};  ///< gamma_r * m(t)
};
MuPair eval_mu_nu(const Rates& rt, const SystemParams& p, double t);

/// Bundle of every propagator coefficient at one time.
struct PropagatorKernel {
    double t = 0.0;
    UV uv;
    KappaPair kappa;
    MuPair mu;
};

enum class KappaSource { closed_form, exact_quadrature };

PropagatorKernel eval_kernel(const SystemParams& p, const Rates& rt, double t,
                             KappaSource source = KappaSource::closed_form);

}  // namespace qed2q
