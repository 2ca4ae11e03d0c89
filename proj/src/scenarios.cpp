#include "qed2q/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace qed2q {

namespace {

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("ScenarioSpec: p must lie in [0, 1]");
}

}  // namespace

DensityMatrix4 build_initial(const ScenarioSpec& spec) {
    check_p(spec.p);
    const double p = spec.p;
    const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();  // computational
    const double s2 = 1.0 / std::sqrt(2.0);
    switch (spec.kind) {
        case ScenarioKind::superposed_ground_doubly:
            psi(0) = sq;
            psi(3) = sp;
            break;
        case ScenarioKind::bell_plus:
            psi(1) = s2;
            psi(2) = s2;
            break;
        case ScenarioKind::bell_minus:
            psi(1) = s2;
            psi(2) = -s2;
            break;
        case ScenarioKind::factorized_ground:
            // (sqrt(p)|1> + sqrt(1-p)|0>)_1 (x) |0>_2
            psi(2) = sp;
            psi(0) = sq;
            break;
        case ScenarioKind::factorized_excited:
            // (sqrt(p)|1> + sqrt(1-p)|0>)_1 (x) |1>_2
            psi(3) = sp;
            psi(1) = sq;
            break;
    }
    return {psi * psi.adjoint(), Basis::computational};
}

DensityMatrix4 closed_form_state(const ScenarioSpec& spec, const Rates& rt,
                                 double t) {
    check_p(spec.p);
    const double p = spec.p;
    const double cross = std::sqrt(p * (1.0 - p));
    const UV uv = eval_u_v(rt, spec.params.omega0, t);
    const KappaPair kp = eval_kappa_closed(rt, t);
    const double g0 = rt.gamma0, gr = rt.gamma_r;

    switch (spec.kind) {
        case ScenarioKind::superposed_ground_doubly: {
            Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();  // collective
            m(3, 3) = p * std::norm(uv.u);
            m(3, 0) = cross * uv.u;
            m(0, 3) = std::conj(m(3, 0));
            m(1, 1) = p * (kp.kappa1 - kp.kappa2);
            m(2, 2) = p * (kp.kappa1 + kp.kappa2);
            m(0, 0) = 1.0 - m(3, 3).real() - m(1, 1).real() - m(2, 2).real();
            return to_computational_basis({m, Basis::collective});
        }
        case ScenarioKind::bell_plus:
        case ScenarioKind::bell_minus: {
            Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
            const bool plus = spec.kind == ScenarioKind::bell_plus;
            const double w = std::exp(-2.0 * (g0 + (plus ? gr : -gr)) * t);
            m(plus ? 2 : 1, plus ? 2 : 1) = w;
            m(0, 0) = 1.0 - w;
            return to_computational_basis({m, Basis::collective});
        }
        case ScenarioKind::factorized_ground: {
            Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();  // computational
            m(2, 2) = p * std::norm(uv.v_plus);
            m(1, 1) = p * std::norm(uv.v_minus);
            m(2, 1) = p * uv.v_plus * std::conj(uv.v_minus);
            m(1, 2) = std::conj(m(2, 1));
            m(2, 0) = cross * uv.v_plus;
            m(0, 2) = std::conj(m(2, 0));
            m(1, 0) = cross * uv.v_minus;
            m(0, 1) = std::conj(m(1, 0));
            m(0, 0) = 1.0 - m(2, 2).real() - m(1, 1).real();
            return {m, Basis::computational};
        }
        case ScenarioKind::factorized_excited: {
            const cplx mm = munu(rt, spec.params, t);
            Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();  // computational
            m(3, 3) = p * std::norm(uv.u);
            m(3, 1) = cross * uv.u * std::conj(uv.v_plus);
            m(1, 3) = std::conj(m(3, 1));
            m(3, 2) = cross * uv.u * std::conj(uv.v_minus);
            m(2, 3) = std::conj(m(3, 2));
            m(1, 1) = (1.0 - p) * std::norm(uv.v_plus) + p * kp.kappa1;
            m(2, 2) = (1.0 - p) * std::norm(uv.v_minus) + p * kp.kappa1;
            m(1, 2) = (1.0 - p) * uv.v_plus * std::conj(uv.v_minus) +
                      p * kp.kappa2;
            m(2, 1) = std::conj(m(1, 2));
            m(1, 0) = cross * g0 * mm;              // feeds |01><00|
            m(0, 1) = std::conj(m(1, 0));
            m(2, 0) = cross * gr * std::conj(mm);   // feeds |10><00|
            m(0, 2) = std::conj(m(2, 0));
            m(0, 0) = 1.0 - m(3, 3).real() - m(1, 1).real() - m(2, 2).real();
            return {m, Basis::computational};
        }
    }
    throw std::logic_error("closed_form_state: unreachable");
}

Trajectory evolve_scenario(const ScenarioSpec& spec,
                           std::span<const double> tgrid, bool cross_check,
                           double tol) {
    const DensityMatrix4 rho0 = build_initial(spec);
    Trajectory traj = propagate_grid(rho0, spec.params, tgrid);
    if (cross_check) {
        const Rates rt = compute_rates(spec.params);
        for (const auto& s : traj.samples) {
            const DensityMatrix4 ref = closed_form_state(spec, rt, s.t);
            const double diff = (s.rho.m - ref.m).cwiseAbs().maxCoeff();
            if (diff > tol)
                throw std::logic_error(
                    "evolve_scenario: propagator disagrees with the closed "
                    "form by " + std::to_string(diff));
        }
    }
    return traj;
}

Eigen::Matrix2cd reduce_qubit(const DensityMatrix4& rho, int which) {
    if (which != 1 && which != 2)
        throw std::invalid_argument("reduce_qubit: which must be 1 or 2");
    const Eigen::Matrix4cd m = rho.basis == Basis::computational
                                   ? rho.m
                                   : to_computational_basis(rho).m;
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                r(a, b) += (which == 1) ? m(2 * a + c, 2 * b + c)
                                        : m(2 * c + a, 2 * c + b);
    return r;
}

double qubit_coherence(const Eigen::Matrix2cd& rho1) {
    return std::abs(rho1(0, 1));
}

std::vector<DecoherenceRow> decoherence_report(const ScenarioSpec& spec,
                                               std::span<const double> tgrid) {
    if (spec.kind != ScenarioKind::factorized_ground &&
        spec.kind != ScenarioKind::factorized_excited)
        throw std::invalid_argument(
            "decoherence_report: requires a factorized scenario");
    const Trajectory traj = evolve_scenario(spec, tgrid);
    const Rates rt = compute_rates(spec.params);
    const double cross = std::sqrt(spec.p * (1.0 - spec.p));
    std::vector<DecoherenceRow> rows;
    rows.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        DecoherenceRow row;
        row.t = s.t;
        row.coherence_q1 = qubit_coherence(reduce_qubit(s.rho, 1));
        row.coherence_q2 = qubit_coherence(reduce_qubit(s.rho, 2));
        row.isolated_baseline = cross * std::exp(-rt.gamma0 * s.t);
        row.ratio_q1 = row.isolated_baseline > 0.0
                           ? row.coherence_q1 / row.isolated_baseline
                           : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qed2q
