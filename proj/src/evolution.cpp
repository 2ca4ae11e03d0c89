#include "qed2q/evolution.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qed2q {

double DensityMatrix4::trace_error() const {
    return std::abs(m.trace() - cplx{1.0, 0.0});
}

double DensityMatrix4::hermiticity_error() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix4::min_eigenvalue() const {
    Eigen::Matrix4cd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix4::require_valid(double tol_trace, double tol_herm,
                                   double tol_eig) const {
    if (trace_error() > tol_trace)
        throw std::domain_error("DensityMatrix4: trace deviates from 1");
    if (hermiticity_error() > tol_herm)
        throw std::domain_error("DensityMatrix4: matrix is not Hermitian");
    if (min_eigenvalue() < -tol_eig)
        throw std::domain_error("DensityMatrix4: matrix is not positive");
}

const Eigen::Matrix4cd& collective_transform() {
    static const Eigen::Matrix4cd b = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        // columns: |O>, |->, |+>, |I> in computational coordinates
        m(0, 0) = 1.0;
        m(1, 1) = s;   // |-> = (|01> - |10>)/sqrt(2)
        m(2, 1) = -s;
        m(1, 2) = s;   // |+> = (|01> + |10>)/sqrt(2)
        m(2, 2) = s;
        m(3, 3) = 1.0;
        return m;
    }();
    return b;
}

DensityMatrix4 to_collective_basis(const DensityMatrix4& rho) {
    if (rho.basis == Basis::collective)
        throw std::invalid_argument("to_collective_basis: already collective");
    const Eigen::Matrix4cd& b = collective_transform();
    return {b.adjoint() * rho.m * b, Basis::collective};
}

DensityMatrix4 to_computational_basis(const DensityMatrix4& rho) {
    if (rho.basis == Basis::computational)
        throw std::invalid_argument(
            "to_computational_basis: already computational");
    const Eigen::Matrix4cd& b = collective_transform();
    return {b * rho.m * b.adjoint(), Basis::computational};
}

Eigen::Matrix4cd propagate_collective_matrix(const Eigen::Matrix4cd& rho0,
                                             const PropagatorKernel& k,
                                             const Rates& rt) {
    // collective indices
    constexpr int O = 0, Mi = 1, Pl = 2, In = 3;
    const cplx u = k.uv.u;
    const cplx a_sub = k.uv.v_plus - k.uv.v_minus;
    const cplx a_sup = k.uv.v_plus + k.uv.v_minus;
    const double dII = std::norm(u);         // e^{-4 gamma0 t}
    const double d_mm = std::norm(a_sub);    // e^{-2(gamma0-gamma_r) t}
    const double d_pp = std::norm(a_sup);    // e^{-2(gamma0+gamma_r) t}
    const cplx d_pm = a_sup * std::conj(a_sub);
    const cplx d_Im = u * std::conj(a_sub);
    const cplx d_Ip = u * std::conj(a_sup);
    const double feed_m = k.kappa.kappa1 - k.kappa.kappa2;
    const double feed_p = k.kappa.kappa1 + k.kappa.kappa2;
    // (gamma0 +- gamma_r) mu  and  i (gamma0 +- gamma_r) nu  feed terms,
    // reconstructed from mu1 = gamma0 m, mu2 = gamma_r m.
    const double gp_mu = std::real(k.mu.mu1 + k.mu.mu2);
    const double gm_mu = std::real(k.mu.mu1 - k.mu.mu2);
    const cplx i_gp_nu{0.0, std::imag(k.mu.mu1 + k.mu.mu2)};
    const cplx i_gm_nu{0.0, std::imag(k.mu.mu1 - k.mu.mu2)};
    (void)rt;

    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    r(In, In) = dII * rho0(In, In);
    r(In, O) = u * rho0(In, O);
    r(O, In) = std::conj(u) * rho0(O, In);
    r(In, Mi) = d_Im * rho0(In, Mi);
    r(Mi, In) = std::conj(d_Im) * rho0(Mi, In);
    r(In, Pl) = d_Ip * rho0(In, Pl);
    r(Pl, In) = std::conj(d_Ip) * rho0(Pl, In);
    r(Mi, Mi) = d_mm * rho0(Mi, Mi) + feed_m * rho0(In, In);
    r(Pl, Pl) = d_pp * rho0(Pl, Pl) + feed_p * rho0(In, In);
    r(Pl, Mi) = d_pm * rho0(Pl, Mi);
    r(Mi, Pl) = std::conj(d_pm) * rho0(Mi, Pl);
    r(Mi, O) = a_sub * rho0(Mi, O) + i_gp_nu * rho0(In, Pl) + gm_mu * rho0(In, Mi);
    r(O, Mi) = std::conj(a_sub) * rho0(O, Mi) - i_gp_nu * rho0(Pl, In) +
               gm_mu * rho0(Mi, In);
    r(Pl, O) = a_sup * rho0(Pl, O) + gp_mu * rho0(In, Pl) + i_gm_nu * rho0(In, Mi);
    r(O, Pl) = std::conj(a_sup) * rho0(O, Pl) + gp_mu * rho0(Pl, In) -
               i_gm_nu * rho0(Mi, In);
    // ground-state population absorbs everything that decayed (exact trace
    // preservation for any input)
    r(O, O) = rho0(O, O) + (1.0 - dII - feed_m - feed_p) * rho0(In, In) +
              (1.0 - d_mm) * rho0(Mi, Mi) + (1.0 - d_pp) * rho0(Pl, Pl);
    return r;
}

DensityMatrix4 propagate(const DensityMatrix4& rho0,
                         const PropagatorKernel& kernel, const Rates& rt,
                         double t) {
    if (std::abs(kernel.t - t) > 1e-12 * (1.0 + std::abs(t)))
        throw std::invalid_argument(
            "propagate: kernel was evaluated at a different time");
    const bool comp = rho0.basis == Basis::computational;
    const Eigen::Matrix4cd rc =
        comp ? to_collective_basis(rho0).m : rho0.m;
    DensityMatrix4 out{propagate_collective_matrix(rc, kernel, rt),
                       Basis::collective};
    return comp ? to_computational_basis(out) : out;
}

void check_grid(std::span<const double> tgrid) {
    if (tgrid.empty() || tgrid.front() != 0.0)
        throw std::invalid_argument("time grid must start at t = 0");
    for (size_t i = 1; i < tgrid.size(); ++i)
        if (!(tgrid[i] > tgrid[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

Trajectory propagate_grid(const DensityMatrix4& rho0, const SystemParams& p,
                          std::span<const double> tgrid, KappaSource source,
                          bool parallel) {
    check_grid(tgrid);
    rho0.require_valid();
    const Rates rt = compute_rates(p);
    Trajectory traj;
    traj.model = Model::nonmarkov;
    traj.params = p;
    traj.samples.resize(tgrid.size());
    const auto n = static_cast<std::ptrdiff_t>(tgrid.size());
    // exact-quadrature kernels may throw; keep those on the serial path
    parallel = parallel && source == KappaSource::closed_form;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double t = tgrid[i];
        const PropagatorKernel k = eval_kernel(p, rt, t, source);
        traj.samples[i] = {t, propagate(rho0, k, rt, t)};
    }
    for (auto& s : traj.samples) {
        traj.worst_eigenvalue =
            std::min(traj.worst_eigenvalue, s.rho.min_eigenvalue());
        traj.worst_trace_error =
            std::max(traj.worst_trace_error, s.rho.trace_error());
    }
    traj.positivity_violation = traj.worst_eigenvalue < -1e-9;
    return traj;
}

std::vector<double> uniform_grid(double t_max, int n) {
    if (!(t_max > 0.0) || n < 2)
        throw std::invalid_argument("uniform_grid: need t_max > 0 and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = t_max * i / (n - 1);
    g[0] = 0.0;
    return g;
}

}  // namespace qed2q
