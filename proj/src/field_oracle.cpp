#include "qed2q/field_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qed2q/markov.hpp"
#include "qed2q/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qed2q {

namespace {
constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};
}  // namespace

/*------------------------------- mode grid --------------------------------*/

ModeGrid build_mode_grid(const SystemParams& p, int n_modes, double k_max,
                         double pair_window_gammas) {
    p.validate();
    if (n_modes < 16)
        throw std::domain_error("build_mode_grid: need at least 16 modes");
    if (k_max <= 0.0) k_max = 20.0 * p.omega0;
    if (k_max < 20.0 * p.omega0)
        throw std::domain_error("build_mode_grid: k_max must be >= 20*omega0");

    const double w0 = p.omega0;
    const double g0 = p.lambda * p.lambda * w0 / (2.0 * kPi);
    const double k_min = 1e-3 * w0;

    ModeGrid grid;
    grid.params = p;
    grid.k_max = k_max;

    std::vector<std::pair<double, double>> pts;  // (k, weight)
    // uniform core across +-10 gamma0, half-step offset so no point sits
    // exactly on resonance and the principal-value sums cancel pairwise
    int n_core = std::max(24, static_cast<int>(0.06 * n_modes + 0.5));
    if (n_core % 2) ++n_core;
    const double core_hw = std::min(10.0 * g0, 0.4 * w0);
    const double h = 2.0 * core_hw / n_core;
    for (int j = 0; j < n_core; ++j)
        pts.emplace_back(w0 + (j + 0.5 - 0.5 * n_core) * h, h);
    // logarithmic shoulders out to 4x the core half-width, mirrored
    const int n_sh = std::max(8, static_cast<int>(0.04 * n_modes + 0.5));
    const double sh_hw = std::min(4.0 * core_hw, 0.8 * w0);
    const auto push_log = [&pts](double a, double b, int n, double base,
                                 int sign) {
        // points between offsets a..b from `base`, on the side `sign`
        const double ratio = b / a;
        for (int j = 0; j < n; ++j) {
            const double lo = a * std::pow(ratio, double(j) / n);
            const double hi = a * std::pow(ratio, double(j + 1) / n);
            pts.emplace_back(base + sign * std::sqrt(lo * hi), hi - lo);
        }
    };
    push_log(core_hw, sh_hw, n_sh, w0, +1);
    push_log(core_hw, sh_hw, n_sh, w0, -1);
    // logarithmic tails
    const int n_tail = n_modes - n_core - 2 * n_sh;
    if (n_tail < 8)
        throw std::domain_error("build_mode_grid: n_modes too small for the tails");
    const double lo_hi = w0 - sh_hw, hi_lo = w0 + sh_hw;
    const double l_low = std::log(lo_hi / k_min);
    const double l_high = std::log(k_max / hi_lo);
    int n_low = std::max(
        4, static_cast<int>(n_tail * l_low / (l_low + l_high) + 0.5));
    n_low = std::min(n_low, n_tail - 4);
    const int n_high = n_tail - n_low;
    const auto push_log_abs = [&pts](double a, double b, int n) {
        const double ratio = b / a;
        for (int j = 0; j < n; ++j) {
            const double lo = a * std::pow(ratio, double(j) / n);
            const double hi = a * std::pow(ratio, double(j + 1) / n);
            pts.emplace_back(std::sqrt(lo * hi), hi - lo);
        }
    };
    push_log_abs(k_min, lo_hi, n_low);
    push_log_abs(hi_lo, k_max, n_high);

    std::sort(pts.begin(), pts.end());
    const int n = static_cast<int>(pts.size());
    grid.k.resize(n);
    grid.w.resize(n);
    grid.g.resize(n);
    grid.s.resize(n);
    grid.kappa_sym.resize(n);
    grid.kappa_anti.resize(n);
    for (int i = 0; i < n; ++i) {
        grid.k[i] = pts[i].first;
        grid.w[i] = pts[i].second;
        grid.g[i] = std::sqrt(p.lambda * p.lambda * grid.k[i] * grid.w[i] /
                              (2.0 * kPi * kPi));
        grid.s[i] = sinc_unnormalized(grid.k[i] * p.r);
        grid.kappa_sym[i] = grid.g[i] * std::sqrt(std::max(0.0, 1.0 + grid.s[i]));
        grid.kappa_anti[i] = grid.g[i] * std::sqrt(std::max(0.0, 1.0 - grid.s[i]));
    }

    int n_res = 0;
    double sw = 0.0, sg2 = 0.0, sg2s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double det = std::abs(grid.k[i] - w0);
        if (det <= pair_window_gammas * g0) grid.window.push_back(i);
        if (det <= 5.0 * g0) {
            ++n_res;
            sw += grid.w[i];
            sg2 += grid.g[i] * grid.g[i];
            sg2s += grid.g[i] * grid.g[i] * grid.s[i];
        }
        grid.delta_self += grid.g[i] * grid.g[i] / (w0 - grid.k[i]);
        grid.delta_cross += grid.g[i] * grid.g[i] * grid.s[i] / (w0 - grid.k[i]);
    }
    if (n_res < 8)
        throw std::domain_error(
            "build_mode_grid: fewer than 8 radial points within 5 gamma0 of "
            "resonance; increase n_modes");
    grid.gamma0_hat = kPi * sg2 / sw;
    grid.gamma_r_hat = kPi * sg2s / sw;
    if (std::abs(grid.gamma0_hat - g0) > 0.02 * g0)
        throw std::domain_error(
            "build_mode_grid: reconstructed decay rate deviates from the "
            "analytic rate by more than 2%");
    return grid;
}

/*------------------------- two-excitation operator ------------------------*/

namespace {
inline Eigen::Index packed_index(int m, int j, int l) {
    // upper triangle including diagonal, row-major; requires j <= l
    return static_cast<Eigen::Index>(j) * (2 * m - j - 1) / 2 + l;
}
}  // namespace

PairSectorOperator::PairSectorOperator(const ModeGrid& grid) {
    n_ = grid.n_radial();
    m_ = static_cast<int>(grid.window.size());
    n_pair_ = static_cast<Eigen::Index>(m_) * (m_ + 1) / 2;
    pair_off_ss_ = 1 + 2 * static_cast<Eigen::Index>(n_);
    pair_off_aa_ = pair_off_ss_ + n_pair_;
    dim_ = pair_off_aa_ + n_pair_;
    two_omega0_ = 2.0 * grid.params.omega0;
    diag_.resize(n_);
    for (int i = 0; i < n_; ++i) diag_[i] = grid.params.omega0 + grid.k[i];
    ks_ = grid.kappa_sym;
    ka_ = grid.kappa_anti;
    win_ = grid.window;
    kw_s_.resize(m_);
    kw_a_.resize(m_);
    for (int j = 0; j < m_; ++j) {
        kw_s_[j] = grid.kappa_sym[win_[j]];
        kw_a_[j] = grid.kappa_anti[win_[j]];
    }
    pair_diag_.resize(n_pair_);
    for (int j = 0; j < m_; ++j)
        for (int l = j; l < m_; ++l)
            pair_diag_[packed_index(m_, j, l)] =
                grid.k[win_[j]] + grid.k[win_[l]];
}

double PairSectorOperator::spectral_bound() const {
    double dmax = two_omega0_, dmin = two_omega0_;
    for (double d : diag_) {
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    for (double d : pair_diag_) {
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    double c2 = 0.0;
    for (int i = 0; i < n_; ++i)
        c2 += ks_[i] * ks_[i] + ka_[i] * ka_[i];
    const double slack = 2.0 * std::sqrt(c2);
    return 0.5 * (dmax - dmin) + slack;
}

namespace {

// shared matvec body; `parallel` toggles the OpenMP pragmas
template <bool Parallel>
void pair_sector_apply(const PairSectorOperator& op_pub,
                       const std::vector<double>& diag,
                       const std::vector<double>& ks,
                       const std::vector<double>& ka,
                       const std::vector<int>& win,
                       const std::vector<double>& kw_s,
                       const std::vector<double>& kw_a,
                       const std::vector<double>& pair_diag, int n, int m,
                       Eigen::Index off_ss, Eigen::Index off_aa,
                       double two_omega0, const Eigen::VectorXcd& x,
                       Eigen::VectorXcd& y) {
    (void)op_pub;
    y.setZero(x.size());
    // doubly excited node and one-photon states
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        acc += ks[i] * x[1 + i] + ka[i] * x[1 + n + i];
        y[1 + i] = diag[i] * x[1 + i] + ks[i] * x[0];
        y[1 + n + i] = diag[i] * x[1 + n + i] + ka[i] * x[0];
    }
    y[0] = two_omega0 * x[0] + acc;

    const double r2 = std::sqrt(2.0);
    // pair scatter: each packed row (j, l >= j) is written by one iteration
#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 0; j < m; ++j) {
        const Eigen::Index row = packed_index(m, j, j);
        const Eigen::Index sj = 1 + win[j];
        const Eigen::Index aj = 1 + n + win[j];
        y[off_ss + row] = pair_diag[row] * x[off_ss + row] +
                          r2 * kw_s[j] * x[sj];
        y[off_aa + row] = pair_diag[row] * x[off_aa + row] -
                          r2 * kw_a[j] * x[aj];
        for (int l = j + 1; l < m; ++l) {
            const Eigen::Index idx = row + (l - j);
            const Eigen::Index sl = 1 + win[l];
            const Eigen::Index al = 1 + n + win[l];
            y[off_ss + idx] = pair_diag[idx] * x[off_ss + idx] +
                              kw_s[l] * x[sj] + kw_s[j] * x[sl];
            y[off_aa + idx] = pair_diag[idx] * x[off_aa + idx] -
                              kw_a[l] * x[aj] - kw_a[j] * x[al];
        }
    }
    // single gather: each window single accumulates over its pair row/column
#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 0; j < m; ++j) {
        cplx gs{0.0, 0.0}, ga{0.0, 0.0};
        for (int l = 0; l < m; ++l) {
            const Eigen::Index idx =
                (l >= j) ? packed_index(m, j, l) : packed_index(m, l, j);
            const double cs = (l == j) ? r2 * kw_s[j] : kw_s[l];
            const double caa = (l == j) ? r2 * kw_a[j] : kw_a[l];
            gs += cs * x[off_ss + idx];
            ga += caa * x[off_aa + idx];
        }
        y[1 + win[j]] += gs;
        y[1 + n + win[j]] -= ga;
    }
}

}  // namespace

void PairSectorOperator::apply_serial(const Eigen::VectorXcd& x,
                                      Eigen::VectorXcd& y) const {
    pair_sector_apply<false>(*this, diag_, ks_, ka_, win_, kw_s_, kw_a_,
                             pair_diag_, n_, m_, pair_off_ss_, pair_off_aa_,
                             two_omega0_, x, y);
}

void PairSectorOperator::apply_parallel(const Eigen::VectorXcd& x,
                                        Eigen::VectorXcd& y) const {
    pair_sector_apply<true>(*this, diag_, ks_, ka_, win_, kw_s_, kw_a_,
                            pair_diag_, n_, m_, pair_off_ss_, pair_off_aa_,
                            two_omega0_, x, y);
}

/*---------------------------- Krylov propagator ---------------------------*/

void krylov_propagate(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& H,
    Eigen::VectorXcd& x, double t_from, double t_to, double spectral_bound,
    const OracleOptions& opt) {
    if (t_to < t_from)
        throw std::invalid_argument("krylov_propagate: t_to < t_from");
    const int m = std::max(4, opt.krylov_m);
    const Eigen::Index dim = x.size();
    Eigen::MatrixXcd v(dim, m + 1);
    Eigen::VectorXd alpha(m), beta(m);
    Eigen::VectorXcd work(dim);

    double t = t_from;
    double dt = 14.0 / std::max(spectral_bound, 1e-300);
    long guard = 0;
    while (t < t_to) {
        if (++guard > 100'000'000L)
            throw std::runtime_error("krylov_propagate: step count exceeded");
        const double beta0 = x.norm();
        if (beta0 == 0.0) return;
        v.col(0) = x / beta0;
        int m_eff = m;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            H(v.col(j), work);
            if (j > 0) work -= beta(j - 1) * v.col(j - 1);
            alpha(j) = std::real(v.col(j).dot(work));
            work -= alpha(j) * v.col(j);
            beta(j) = work.norm();
            if (beta(j) < 1e-13 * std::max(1.0, std::abs(alpha(j)))) {
                m_eff = j + 1;
                breakdown = true;
                break;
            }
            if (j + 1 < m + 1) v.col(j + 1) = work / beta(j);
        }
        Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m_eff, m_eff);
        for (int j = 0; j < m_eff; ++j) {
            tmat(j, j) = alpha(j);
            if (j + 1 < m_eff) {
                tmat(j, j + 1) = beta(j);
                tmat(j + 1, j) = beta(j);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tmat);
        const Eigen::MatrixXd& q = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();
        const Eigen::VectorXd qe1 = q.row(0).transpose();

        for (;;) {
            const double hstep = std::min(dt, t_to - t);
            Eigen::VectorXcd phase(m_eff);
            for (int j = 0; j < m_eff; ++j)
                phase(j) = std::exp(-kI * lam(j) * hstep) * qe1(j);
            const Eigen::VectorXcd y = q * phase;  // exp(-i h T) e1
            const double err_rel =
                breakdown ? 0.0
                          : hstep * beta(m_eff - 1) * std::abs(y(m_eff - 1));
            if (err_rel <= opt.krylov_tol || hstep <= 1e-14 * dt) {
                x = beta0 * (v.leftCols(m_eff) * y);
                t += hstep;
                const double grow = std::min(
                    2.0, 0.9 * std::pow(opt.krylov_tol /
                                            std::max(err_rel, 1e-18),
                                        1.0 / m));
                dt = hstep * std::max(grow, 1.0);
                break;
            }
            dt = hstep * std::max(
                             0.1, 0.9 * std::pow(opt.krylov_tol / err_rel,
                                                 1.0 / m));
        }
    }
}

/*--------------------------- amplitude evolution --------------------------*/

OracleAmplitudes integrate_amplitudes(const ModeGrid& grid,
                                      std::span<const double> tgrid,
                                      const OracleOptions& opt) {
    check_grid(tgrid);
    const int n = grid.n_radial();
    const int nt = static_cast<int>(tgrid.size());
    const double w0 = grid.params.omega0;

    OracleAmplitudes amps;
    amps.t.assign(tgrid.begin(), tgrid.end());
    amps.b_sym.resize(nt);
    amps.b_anti.resize(nt);
    amps.f_sym.resize(n, nt);
    amps.f_anti.resize(n, nt);
    amps.a_e.resize(nt);
    amps.a_sym.resize(n, nt);
    amps.a_anti.resize(n, nt);
    amps.pair_norm_ss.resize(nt);
    amps.pair_norm_aa.resize(nt);
    amps.norm_err_single.assign(nt, 0.0);
    amps.norm_err_double.resize(nt);

    // one-excitation chains: emitter node + radial modes (arrow matrix)
    const double chain_bound =
        0.5 * (grid.k.back() - grid.k.front()) +
        2.0 * std::sqrt(std::inner_product(grid.g.begin(), grid.g.end(),
                                           grid.g.begin(), 0.0)) +
        w0;
    const auto run_chain = [&](const std::vector<double>& coup, double sign,
                               std::vector<cplx>& b_out,
                               Eigen::MatrixXcd& f_out) {
        const auto matvec = [&](const Eigen::VectorXcd& xv,
                                Eigen::VectorXcd& yv) {
            yv.resize(xv.size());
            cplx acc{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                acc += sign * coup[i] * xv[1 + i];
                yv[1 + i] = grid.k[i] * xv[1 + i] + sign * coup[i] * xv[0];
            }
            yv[0] = w0 * xv[0] + acc;
        };
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n + 1);
        x[0] = 1.0;
        double tprev = 0.0;
        for (int it = 0; it < nt; ++it) {
            krylov_propagate(matvec, x, tprev, tgrid[it], chain_bound, opt);
            tprev = tgrid[it];
            b_out[it] = x[0];
            f_out.col(it) = x.segment(1, n);
            amps.norm_err_single[it] = std::max(amps.norm_err_single[it],
                                                std::abs(x.norm() - 1.0));
        }
    };
    run_chain(grid.kappa_sym, +1.0, amps.b_sym, amps.f_sym);
    run_chain(grid.kappa_anti, -1.0, amps.b_anti, amps.f_anti);

    // two-excitation sector
    PairSectorOperator op(grid);
    const auto matvec2 = [&](const Eigen::VectorXcd& xv, Eigen::VectorXcd& yv) {
        if (opt.parallel)
            op.apply_parallel(xv, yv);
        else
            op.apply_serial(xv, yv);
    };
    Eigen::VectorXcd x2 = Eigen::VectorXcd::Zero(op.dim());
    x2[0] = 1.0;
    const double bound2 = op.spectral_bound();
    double tprev = 0.0;
    for (int it = 0; it < nt; ++it) {
        krylov_propagate(matvec2, x2, tprev, tgrid[it], bound2, opt);
        tprev = tgrid[it];
        amps.a_e[it] = x2[0];
        amps.a_sym.col(it) = x2.segment(1, n);
        amps.a_anti.col(it) = x2.segment(1 + n, n);
        const Eigen::Index np = op.n_pairs();
        amps.pair_norm_ss[it] = x2.segment(1 + 2 * n, np).squaredNorm();
        amps.pair_norm_aa[it] = x2.segment(1 + 2 * n + np, np).squaredNorm();
        amps.norm_err_double[it] = std::abs(x2.norm() - 1.0);
    }
    return amps;
}

/*----------------------------- reconstruction -----------------------------*/

Trajectory reconstruct_rho(const ModeGrid& grid, const OracleAmplitudes& amps,
                           const Eigen::Vector4cd& c0) {
    if (std::abs(c0.norm() - 1.0) > 1e-10)
        throw std::domain_error("reconstruct_rho: initial state must be normalized");
    const int n = grid.n_radial();
    const int nt = static_cast<int>(amps.t.size());
    const cplx c_o = c0(0), c_01 = c0(1), c_10 = c0(2), c_e = c0(3);
    const double s2 = 1.0 / std::sqrt(2.0);

    Trajectory traj;
    traj.model = Model::oracle;
    traj.params = grid.params;
    traj.samples.resize(nt);

    for (int it = 0; it < nt; ++it) {
        const cplx bs = amps.b_sym[it], ba = amps.b_anti[it];
        // one-excitation emitter amplitudes
        const cplx amp_10 = 0.5 * ((c_10 + c_01) * bs + (c_10 - c_01) * ba);
        const cplx amp_01 = 0.5 * ((c_10 + c_01) * bs - (c_10 - c_01) * ba);
        const cplx e_amp = c_e * amps.a_e[it];

        // sums over field modes
        double p_sym = amps.a_sym.col(it).squaredNorm();   // Sum_S |a_sym|^2
        double p_anti = amps.a_anti.col(it).squaredNorm();
        double phot_norm = 0.0;  // Sum |Phi|^2
        cplx s1_phi{0.0, 0.0}, s2_phi{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            const cplx phi_s = (c_10 + c_01) * s2 * amps.f_sym(i, it);
            const cplx phi_a = -(c_10 - c_01) * s2 * amps.f_anti(i, it);
            phot_norm += std::norm(phi_s) + std::norm(phi_a);
            const cplx as = s2 * amps.a_sym(i, it);
            const cplx aa = s2 * amps.a_anti(i, it);
            s1_phi += as * std::conj(phi_s) - aa * std::conj(phi_a);
            s2_phi += as * std::conj(phi_s) + aa * std::conj(phi_a);
        }
        const double kap_same = 0.5 * (p_sym + p_anti);  // Sum |S_n|^2, either n
        const cplx kap_cross{0.5 * (p_sym - p_anti), 0.0};
        const double ce2 = std::norm(c_e);

        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(3, 3) = std::norm(e_amp);
        m(3, 2) = e_amp * std::conj(amp_10);
        m(3, 1) = e_amp * std::conj(amp_01);
        m(3, 0) = e_amp * std::conj(c_o);
        m(2, 2) = std::norm(amp_10) + ce2 * kap_same;
        m(1, 1) = std::norm(amp_01) + ce2 * kap_same;
        m(2, 1) = amp_10 * std::conj(amp_01) + ce2 * kap_cross;
        m(2, 0) = amp_10 * std::conj(c_o) + c_e * s1_phi;
        m(1, 0) = amp_01 * std::conj(c_o) + c_e * s2_phi;
        m(0, 0) = std::norm(c_o) + phot_norm +
                  ce2 * (amps.pair_norm_ss[it] + amps.pair_norm_aa[it]);
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) m(a, b) = std::conj(m(b, a));
        traj.samples[it] = {amps.t[it],
                            DensityMatrix4{m, Basis::computational}};
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

/*--------------------------------- audit ----------------------------------*/

OracleAudit oracle_audit(const SystemParams& p, int n_modes, double k_max,
                         double t_max_gamma0, int n_samples,
                         const OracleOptions& opt) {
    const Rates rt = compute_rates(p);
    const ModeGrid grid = build_mode_grid(p, n_modes, k_max);
    const double t_max = t_max_gamma0 / rt.gamma0;
    const std::vector<double> tgrid = uniform_grid(t_max, n_samples);
    const OracleAmplitudes amps = integrate_amplitudes(grid, tgrid, opt);

    OracleAudit audit;
    audit.params = p;
    audit.n_modes = n_modes;
    audit.k_max = grid.k_max;
    audit.delta_self = grid.delta_self;
    audit.sigma_disc = -grid.delta_cross;
    audit.gamma0_hat_rel_err =
        std::abs(grid.gamma0_hat - rt.gamma0) / rt.gamma0;
    audit.gamma_r_hat_err =
        std::abs(grid.gamma_r_hat - rt.gamma_r) / rt.gamma0;

    // discrete model's own renormalized shift for the channel comparison
    Rates rt_eff = rt;
    rt_eff.sigma = audit.sigma_disc;

    const auto rel = [](cplx a, cplx b) {
        return std::abs(a - b) / std::max(std::abs(b), 0.05);
    };
    const int nt = static_cast<int>(tgrid.size());
    std::vector<double> pp_o(nt), pm_o(nt), pp_semi(nt), pm_semi(nt),
        pp_closed(nt);
    for (int it = 0; it < nt; ++it) {
        const double t = tgrid[it];
        const cplx derot1 = std::exp(kI * grid.delta_self * t);
        const cplx derot2 = derot1 * derot1;
        const cplx u_o = amps.a_e[it] * derot2;
        const cplx vp_o =
            0.5 * (amps.b_sym[it] + amps.b_anti[it]) * derot1;
        const cplx vm_o =
            0.5 * (amps.b_sym[it] - amps.b_anti[it]) * derot1;
        const UV uv = eval_u_v(rt_eff, p.omega0, t);
        audit.err_u = std::max(audit.err_u, rel(u_o, uv.u));
        audit.err_v_plus = std::max(audit.err_v_plus, rel(vp_o, uv.v_plus));
        audit.err_v_minus = std::max(audit.err_v_minus, rel(vm_o, uv.v_minus));

        // Sum only modes inside the pair window: amplitudes far off
        // resonance are virtual dressing, not radiated population, and in
        // the truncated model they also never decay.
        pp_o[it] = 0.0;
        pm_o[it] = 0.0;
        for (int i : grid.window) {
            pp_o[it] += std::norm(amps.a_sym(i, it));
            pm_o[it] += std::norm(amps.a_anti(i, it));
        }
        // Bell-state populations: an initial |+> (|->) state stays in the
        // symmetric (antisymmetric) chain, so its population is |b|^2
        const double bp_o = std::norm(amps.b_sym[it]);
        const double bm_o = std::norm(amps.b_anti[it]);
        const double bp_x = std::exp(-2.0 * (rt.gamma0 + rt.gamma_r) * t);
        const double bm_x = std::exp(-2.0 * (rt.gamma0 - rt.gamma_r) * t);
        audit.err_bell_plus_pop =
            std::max(audit.err_bell_plus_pop,
                     std::abs(bp_o - bp_x) / std::max(bp_x, 0.05));
        audit.err_bell_minus_pop =
            std::max(audit.err_bell_minus_pop,
                     std::abs(bm_o - bm_x) / std::max(bm_x, 0.05));
        const MarkovPopulations cas = cascade_from_doubly_excited(rt, 1.0, t);
        pp_semi[it] = cas.p_plus;
        pm_semi[it] = cas.p_minus;
        const KappaPair kc = eval_kappa_closed(rt, t);
        pp_closed[it] = kc.kappa1 + kc.kappa2;

        audit.max_norm_err_single =
            std::max(audit.max_norm_err_single, amps.norm_err_single[it]);
        audit.max_norm_err_double =
            std::max(audit.max_norm_err_double, amps.norm_err_double[it]);
    }
    const auto pop_err = [](const std::vector<double>& o,
                            const std::vector<double>& r) {
        const double scale =
            std::max(*std::max_element(r.begin(), r.end()), 1e-300);
        double e = 0.0;
        for (size_t i = 0; i < o.size(); ++i)
            e = std::max(e, std::abs(o[i] - r[i]) /
                                std::max(r[i], 0.05 * scale));
        return e;
    };
    audit.err_pop_plus_semigroup = pop_err(pp_o, pp_semi);
    audit.err_pop_minus_semigroup = pop_err(pm_o, pm_semi);
    audit.err_pop_plus_closed_kappa = pop_err(pp_o, pp_closed);

    // spot-check the exact mode-sum quadrature at a few interior times,
    // with the same floored relative metric used for the feeds
    const int n_spot = std::min(6, nt - 1);
    double fp_scale = 0.0, fm_scale = 0.0;
    std::vector<std::array<double, 4>> spots;  // pp_o, pp_x, pm_o, pm_x
    for (int j = 1; j <= n_spot; ++j) {
        const int it = j * (nt - 1) / n_spot;
        const double t = tgrid[it];
        if (t <= 0.0) continue;
        const KappaPair kx = eval_kappa_exact(p, rt, t);
        spots.push_back({pp_o[it], kx.kappa1 + kx.kappa2, pm_o[it],
                         kx.kappa1 - kx.kappa2});
        fp_scale = std::max(fp_scale, std::abs(kx.kappa1 + kx.kappa2));
        fm_scale = std::max(fm_scale, std::abs(kx.kappa1 - kx.kappa2));
    }
    for (const auto& s : spots) {
        audit.err_feed_plus_quadrature =
            std::max(audit.err_feed_plus_quadrature,
                     std::abs(s[0] - s[1]) /
                         std::max(std::abs(s[1]), 0.05 * fp_scale));
        audit.dev_feed_minus_quadrature =
            std::max(audit.dev_feed_minus_quadrature,
                     std::abs(s[2] - s[3]) /
                         std::max(std::abs(s[3]), 0.05 * fm_scale));
    }

    const Trajectory rec =
        reconstruct_rho(grid, amps, Eigen::Vector4cd(0.0, 0.0, 0.0, 1.0));
    audit.worst_eigenvalue = rec.worst_eigenvalue;
    audit.worst_trace_err = rec.worst_trace_error;
    return audit;
}

}  // namespace qed2q
