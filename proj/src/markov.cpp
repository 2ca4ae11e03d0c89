#include "qed2q/markov.hpp"

#include <cmath>
#include <stdexcept>

#include "qed2q/master_eq.hpp"
#include "qed2q/ode.hpp"

namespace qed2q {

namespace {

// e^{-4 g0 t} * expm1(2 a t) / a evaluated without overflow or cancellation;
// a -> 0 limit is 2t.
double feed_factor(double gamma0, double a, double t) {
    if (a == 0.0) return 2.0 * t * std::exp(-4.0 * gamma0 * t);
    if (2.0 * a * t < 300.0)
        return std::exp(-4.0 * gamma0 * t) * std::expm1(2.0 * a * t) / a;
    return (std::exp(-(4.0 * gamma0 - 2.0 * a) * t) -
            std::exp(-4.0 * gamma0 * t)) /
           a;
}

}  // namespace

MarkovPopulations transfer_matrix_evolve(const Rates& rt,
                                         const MarkovPopulations& p0,
                                         double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error("transfer_matrix_evolve: t must be >= 0");
    const double vals[4] = {p0.p_ii, p0.p_plus, p0.p_minus, p0.p_oo};
    double total = 0.0;
    for (double v : vals) {
        if (v < -1e-15 || !std::isfinite(v))
            throw std::domain_error(
                "transfer_matrix_evolve: populations must be non-negative");
        total += v;
    }
    if (total > 1.0 + 1e-12)
        throw std::domain_error(
            "transfer_matrix_evolve: populations must sum to at most 1");

    const double g0 = rt.gamma0, gr = rt.gamma_r;
    MarkovPopulations p;
    p.p_ii = p0.p_ii * std::exp(-4.0 * g0 * t);
    // the feed into |+-> accumulated from the decaying |I> population
    p.p_plus = p0.p_plus * std::exp(-2.0 * (g0 + gr) * t) +
               p0.p_ii * (g0 + gr) * feed_factor(g0, g0 - gr, t);
    p.p_minus = p0.p_minus * std::exp(-2.0 * (g0 - gr) * t) +
                p0.p_ii * (g0 - gr) * feed_factor(g0, g0 + gr, t);
    p.p_oo = total - p.p_ii - p.p_plus - p.p_minus;
    return p;
}

MarkovPopulations cascade_from_doubly_excited(const Rates& rt, double p,
                                              double t) {
    MarkovPopulations p0;
    p0.p_ii = p;
    p0.p_oo = 1.0 - p;
    return transfer_matrix_evolve(rt, p0, t);
}

Trajectory lindblad_integrate(const DensityMatrix4& rho0,
                              const SystemParams& p,
                              std::span<const double> tgrid, double rel_tol) {
    check_grid(tgrid);
    rho0.require_valid();
    const Rates rt = compute_rates(p);
    const SuperOp L = semigroup_generator(rt, p.omega0);
    const bool comp = rho0.basis == Basis::computational;
    const Eigen::Matrix4cd rc = comp ? to_collective_basis(rho0).m : rho0.m;

    Eigen::VectorXcd y(16);
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) y(a + 4 * b) = rc(a, b);

    const auto rhs = [&](double, const Eigen::VectorXcd& yv,
                         Eigen::VectorXcd& dydt) { dydt = L * yv; };

    Trajectory traj;
    traj.model = Model::markov;
    traj.params = p;
    ode::Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = rel_tol * 1e-3;
    double tprev = 0.0;
    for (double t : tgrid) {
        ode::integrate(rhs, y, tprev, t, opt);
        tprev = t;
        DensityMatrix4 s;
        s.basis = Basis::collective;
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a) s.m(a, b) = y(a + 4 * b);
        if (comp) s = to_computational_basis(s);
        traj.worst_eigenvalue =
            std::min(traj.worst_eigenvalue, s.min_eigenvalue());
        traj.worst_trace_error = std::max(traj.worst_trace_error, s.trace_error());
        traj.samples.push_back({t, std::move(s)});
    }
    traj.positivity_violation = traj.worst_eigenvalue < -1e-9;
    return traj;
}

}  // namespace qed2q
