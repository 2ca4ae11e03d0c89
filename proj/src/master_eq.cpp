#include "qed2q/master_eq.hpp"

#include <cmath>
#include <stdexcept>

#include "qed2q/ode.hpp"

namespace qed2q {

namespace {

const cplx kI{0.0, 1.0};

Eigen::Matrix4cd unit(int a, int b) {
    Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
    e(a, b) = 1.0;
    return e;
}

/// Superoperator of rho -> A rho B under vec(rho)_[a+4b] = rho(a,b).
SuperOp sandwich(const Eigen::Matrix4cd& A, const Eigen::Matrix4cd& B) {
    SuperOp s = SuperOp::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    s(a + 4 * b, c + 4 * d) += A(a, c) * B(d, b);
    return s;
}

Eigen::Vector<cplx, 16> vec_of(const Eigen::Matrix4cd& m) {
    Eigen::Vector<cplx, 16> v;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) v(a + 4 * b) = m(a, b);
    return v;
}

Eigen::Matrix4cd mat_of(const Eigen::Vector<cplx, 16>& v) {
    Eigen::Matrix4cd m;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) m(a, b) = v(a + 4 * b);
    return m;
}

double one_norm(const SuperOp& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

AlphaCoefficients alpha_coefficients(const Rates& rt, const SystemParams& p,
                                     double t, double horizon_gamma0_t) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error("alpha_coefficients: t must be finite and >= 0");
    if (rt.gamma0 * t > horizon_gamma0_t)
        throw std::range_error(
            "alpha_coefficients: gamma0*t beyond evaluation horizon; the "
            "counter-exponentials lose all significance");

    const double g0 = rt.gamma0, gr = rt.gamma_r, sg = rt.sigma;
    const double w0 = p.omega0;
    const cplx m = munu(rt, p, t);
    const cplx md = munu_dot(rt, p, t);
    const double mu = m.real(), nu = m.imag();
    const double mud = md.real(), nud = md.imag();
    const cplx zm = cplx{g0 - gr, w0 - sg};  // gamma0-gamma_r + i(omega0-sigma)
    const cplx zp = cplx{g0 + gr, w0 + sg};
    // exponents combined analytically before exponentiation
    const cplx e_fast = std::exp(cplx{(3.0 * g0 + gr) * t, (w0 + sg) * t});
    const cplx e_slow = std::exp(cplx{(3.0 * g0 - gr) * t, (w0 - sg) * t});
    const double kap = kappa_base(rt, t);
    const double kapd = kappa_base_dot(rt, t);
    const double e4 = std::exp(4.0 * g0 * t);

    AlphaCoefficients a;
    a.t = t;
    a.alpha[0] = kI * (nud + nu * zm) * e_fast;
    a.alpha[1] = (mud + mu * zm) * e_slow;
    a.alpha[2] = (mud + mu * zp) * e_fast;
    a.alpha[3] = kI * (nud + nu * zp) * e_slow;
    a.alpha[4] = (kapd + 2.0 * (g0 + gr) * kap) * e4;
    a.alpha[5] = (kapd + 2.0 * (g0 - gr) * kap) * e4;
    return a;
}

SuperOp semigroup_generator(const Rates& rt, double omega0) {
    // collective-basis Hamiltonian: free part plus dipole-dipole shift
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h(0, 0) = 0.0;
    h(1, 1) = omega0 + rt.sigma;  // |->
    h(2, 2) = omega0 - rt.sigma;  // |+>
    h(3, 3) = 2.0 * omega0;
    // site lowering operators rotated into the collective basis
    const Eigen::Matrix4cd& b = collective_transform();
    Eigen::Matrix4cd s1 = unit(0, 2) + unit(1, 3);  // |00><10| + |01><11|
    Eigen::Matrix4cd s2 = unit(0, 1) + unit(2, 3);
    s1 = (b.adjoint() * s1 * b).eval();
    s2 = (b.adjoint() * s2 * b).eval();
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();

    SuperOp L = -kI * (sandwich(h, id) - sandwich(id, h));
    const Eigen::Matrix4cd sm[2] = {s1, s2};
    const double gam[2][2] = {{rt.gamma0, rt.gamma_r},
                              {rt.gamma_r, rt.gamma0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Eigen::Matrix4cd pp = sm[i].adjoint() * sm[j];
            L -= gam[i][j] * (sandwich(pp, id) + sandwich(id, pp) -
                              2.0 * sandwich(sm[i], sm[j].adjoint()));
        }
    return L;
}

SuperOp correction_f(const AlphaCoefficients& a) {
    const Eigen::Matrix4cd A_pI = unit(2, 3), A_OI = unit(0, 3),
                           A_pp = unit(2, 2), A_pm = unit(2, 1);
    const Eigen::Matrix4cd id4 = Eigen::Matrix4cd::Identity();
    (void)id4;
    const cplx a1 = a.alpha[0], a3 = a.alpha[2], a5 = a.alpha[4];
    SuperOp F = SuperOp::Zero();
    F -= (2.0 - a5) * (sandwich(A_pI, A_pI.adjoint()) -
                       sandwich(A_OI, A_OI.adjoint()));
    F -= (2.0 - a3) * sandwich(A_OI, A_pp);
    F -= (2.0 - std::conj(a3)) * sandwich(A_pp, A_OI.adjoint());
    F += a1 * sandwich(A_OI, A_pm);
    F += std::conj(a1) * sandwich(A_pm.adjoint(), A_OI.adjoint());
    return F;
}

SuperOp correction_g(const AlphaCoefficients& a) {
    const Eigen::Matrix4cd A_mI = unit(1, 3), A_OI = unit(0, 3),
                           A_mm = unit(1, 1), A_pm = unit(2, 1);
    const cplx a2 = a.alpha[1], a4 = a.alpha[3], a6 = a.alpha[5];
    SuperOp G = SuperOp::Zero();
    G -= (2.0 - a6) * (sandwich(A_mI, A_mI.adjoint()) -
                       sandwich(A_OI, A_OI.adjoint()));
    G += (2.0 + a2) * sandwich(A_OI, A_mm);
    G += (2.0 + std::conj(a2)) * sandwich(A_mm, A_OI.adjoint());
    G += a4 * sandwich(A_OI, A_pm.adjoint());
    G += std::conj(a4) * sandwich(A_pm.adjoint(), A_OI.adjoint());
    return G;
}

SuperOp assembled_generator(const Rates& rt, const SystemParams& p, double t,
                            double horizon_gamma0_t) {
    const AlphaCoefficients a = alpha_coefficients(rt, p, t, horizon_gamma0_t);
    return semigroup_generator(rt, p.omega0) +
           (rt.gamma0 + rt.gamma_r) * correction_f(a) +
           (rt.gamma0 - rt.gamma_r) * correction_g(a);
}

DensityMatrix4 apply_lindblad_like(const DensityMatrix4& rho, const Rates& rt,
                                   const SystemParams& p,
                                   const AlphaCoefficients& a) {
    const SuperOp L = semigroup_generator(rt, p.omega0) +
                      (rt.gamma0 + rt.gamma_r) * correction_f(a) +
                      (rt.gamma0 - rt.gamma_r) * correction_g(a);
    const bool comp = rho.basis == Basis::computational;
    const Eigen::Matrix4cd rc = comp ? to_collective_basis(rho).m : rho.m;
    DensityMatrix4 out{mat_of(L * vec_of(rc)), Basis::collective};
    if (comp) {
        out.m = (collective_transform() * out.m *
                 collective_transform().adjoint())
                    .eval();
        out.basis = Basis::computational;
    }
    return out;
}

SuperOp propagator_matrix(const SystemParams& p, const Rates& rt, double t,
                          KappaSource source) {
    const PropagatorKernel k = eval_kernel(p, rt, t, source);
    SuperOp m;
    for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
            m.col(c + 4 * d) =
                vec_of(propagate_collective_matrix(unit(c, d), k, rt));
    return m;
}

GeneratorMatrix generator_from_propagator(const SystemParams& p, double t,
                                          double fd_dt, double cond_limit) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error(
            "generator_from_propagator: t must be finite and >= 0");
    const Rates rt = compute_rates(p);
    const double dt = fd_dt > 0.0 ? fd_dt : 1e-5 / p.omega0;
    const SuperOp m0 = propagator_matrix(p, rt, t);
    SuperOp mdot;
    if (t >= dt) {
        mdot = (propagator_matrix(p, rt, t + dt) -
                propagator_matrix(p, rt, t - dt)) /
               (2.0 * dt);
    } else {
        mdot = (propagator_matrix(p, rt, t + dt) - m0) / dt;
    }
    Eigen::PartialPivLU<SuperOp> lu(m0);
    const SuperOp minv = lu.inverse();
    GeneratorMatrix g;
    g.t = t;
    g.condition_estimate = one_norm(m0) * one_norm(minv);
    if (!std::isfinite(g.condition_estimate) ||
        g.condition_estimate > cond_limit)
        throw std::range_error(
            "generator_from_propagator: propagator matrix is numerically "
            "singular at this time");
    g.g = mdot * minv;
    return g;
}

Trajectory integrate_master(const DensityMatrix4& rho0, const SystemParams& p,
                            std::span<const double> tgrid,
                            GeneratorSource source, double rel_tol,
                            double fd_dt) {
    check_grid(tgrid);
    rho0.require_valid();
    const Rates rt = compute_rates(p);
    const bool comp = rho0.basis == Basis::computational;
    const Eigen::Matrix4cd rc = comp ? to_collective_basis(rho0).m : rho0.m;

    Eigen::VectorXcd y = vec_of(rc);
    const auto rhs = [&](double t, const Eigen::VectorXcd& yv,
                         Eigen::VectorXcd& dydt) {
        const SuperOp L = (source == GeneratorSource::assembled_alphas)
                              ? assembled_generator(rt, p, t)
                              : generator_from_propagator(p, t, fd_dt).g;
        dydt = L * yv;
    };

    Trajectory traj;
    traj.model = Model::master_equation;
    traj.params = p;
    traj.samples.reserve(tgrid.size());
    ode::Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = rel_tol * 1e-3;
    double tprev = 0.0;
    for (double t : tgrid) {
        ode::integrate(rhs, y, tprev, t, opt);
        tprev = t;
        Eigen::Vector<cplx, 16> yf = y.head<16>();
        DensityMatrix4 s{mat_of(yf), Basis::collective};
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
