#include "qed2q/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace qed2q {

namespace {

Eigen::Matrix4cd spin_flip_matrix() {
    // sigma_y (x) sigma_y in the computational basis
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

double concurrence_from_sqrt_eigs(std::array<double, 4> s) {
    std::sort(s.begin(), s.end(), std::greater<>());
    return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

// Hermitian fallback: eigenvalues of sqrt(rho) rho~ sqrt(rho).
double concurrence_hermitian(const Eigen::Matrix4cd& rho,
                             const Eigen::Matrix4cd& rho_tilde) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sq =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
        es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(sq * rho_tilde * sq);
    std::array<double, 4> s{};
    for (int i = 0; i < 4; ++i)
        s[i] = std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    return concurrence_from_sqrt_eigs(s);
}

}  // namespace

double concurrence(const DensityMatrix4& rho_in) {
    const DensityMatrix4& rho_any = rho_in;
    rho_any.require_valid(1e-8, 1e-8, 1e-7);
    const DensityMatrix4 rho_c = rho_in.basis == Basis::computational
                                     ? rho_in
                                     : to_computational_basis(rho_in);
    static const Eigen::Matrix4cd y = spin_flip_matrix();
    const Eigen::Matrix4cd rho_tilde = y * rho_c.m.conjugate() * y;
    const Eigen::Matrix4cd prod = rho_c.m * rho_tilde;

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(prod, false);
    std::array<double, 4> s{};
    for (int i = 0; i < 4; ++i) {
        const cplx ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-10)
            return concurrence_hermitian(rho_c.m, rho_tilde);
        double re = ev.real();
        if (re < 0.0) {
            if (re < -1e-12) return concurrence_hermitian(rho_c.m, rho_tilde);
            re = 0.0;
        }
        s[i] = std::sqrt(re);
    }
    return concurrence_from_sqrt_eigs(s);
}

ConcurrenceSeries concurrence_series(const Trajectory& traj) {
    ConcurrenceSeries cs;
    cs.t.reserve(traj.samples.size());
    cs.value.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        cs.t.push_back(s.t);
        cs.value.push_back(concurrence(s.rho));
    }
    annotate_series(cs);
    return cs;
}

void annotate_series(ConcurrenceSeries& cs) {
    cs.death_time.reset();
    cs.revival_time.reset();
    cs.revival_detected = false;
    const auto n = cs.value.size();
    // first index followed by kDeathWindow consecutive sub-threshold samples
    for (size_t i = 0; i + kDeathWindow <= n && !cs.death_time; ++i) {
        bool dead = true;
        for (int j = 0; j < kDeathWindow; ++j)
            dead = dead && cs.value[i + j] < kConcurrenceFloor;
        if (dead) cs.death_time = cs.t[i];
    }
    if (cs.death_time) {
        for (size_t i = 0; i < n; ++i) {
            if (cs.t[i] > *cs.death_time && cs.value[i] >= kConcurrenceFloor) {
                cs.revival_detected = true;
                cs.revival_time = cs.t[i];
                break;
            }
        }
    }
}

SuddenDeathReport detect_sudden_death(const ConcurrenceSeries& series) {
    SuddenDeathReport rep;
    rep.death_time = series.death_time;
    rep.revival_time = series.revival_time;
    if (!series.death_time)
        rep.classification = DecayClass::smooth_decay;
    else if (series.revival_detected)
        rep.classification = DecayClass::sudden_death_with_revival;
    else
        rep.classification = DecayClass::sudden_death;
    return rep;
}

}  // namespace qed2q
