// Acceptance gate: eleven numbered criteria, one verdict line each.
// Usage: acceptance <n>  (n = 1..11)  or  acceptance all
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qed2q/entanglement.hpp"
#include "qed2q/evolution.hpp"
#include "qed2q/field_oracle.hpp"
#include "qed2q/markov.hpp"
#include "qed2q/master_eq.hpp"
#include "qed2q/scenarios.hpp"

using namespace qed2q;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/*------------------------------ criterion 1 -------------------------------*/
// gamma0 = lambda^2 omega0 / 2 pi to 1e-12 relative; gamma_r vanishes at
// separations n pi / omega0; |gamma_r| <= gamma0 everywhere.
bool crit1(std::string& d) {
    double worst_g0 = 0.0, worst_node = 0.0, worst_excess = 0.0;
    for (double lambda : {0.03, 0.1, 0.2})
        for (double w0 : {0.5, 1.0, 2.0}) {
            const Rates rt = compute_rates({lambda, w0, 1.0});
            worst_g0 = std::max(
                worst_g0, std::abs(rt.gamma0 - lambda * lambda * w0 /
                                                   (2.0 * kPi)) /
                              rt.gamma0);
        }
    for (int n = 1; n <= 10; ++n) {
        const Rates rt = compute_rates({0.1, 1.0, n * kPi});
        worst_node = std::max(worst_node, std::abs(rt.gamma_r));
    }
    for (double w0r = 0.01; w0r < 100.0; w0r *= 1.07) {
        const Rates rt = compute_rates({0.1, 1.0, w0r});
        worst_excess =
            std::max(worst_excess, std::abs(rt.gamma_r) - rt.gamma0);
    }
    d = "gamma0 rel err " + fmt(worst_g0) + ", node |gamma_r| " +
        fmt(worst_node) + ", max(|gamma_r|-gamma0) " + fmt(worst_excess);
    return worst_g0 < 1e-12 && worst_node < 1e-14 && worst_excess <= 0.0;
}

/*------------------------------ criterion 2 -------------------------------*/
// Propagator coefficients at t = 0 and |u(t)| = e^{-2 gamma0 t}.
bool crit2(std::string& d) {
    const SystemParams p{0.1, 1.0, 1.0};
    const Rates rt = compute_rates(p);
    const PropagatorKernel k0 = eval_kernel(p, rt, 0.0);
    const double id_err = std::max(
        {std::abs(k0.uv.u - cplx(1.0)), std::abs(k0.uv.v_plus - cplx(1.0)),
         std::abs(k0.uv.v_minus), std::abs(k0.kappa.kappa1),
         std::abs(k0.kappa.kappa2), std::abs(k0.mu.mu1),
         std::abs(k0.mu.mu2)});
    double mod_err = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = 10.0 * i / 100.0 / rt.gamma0;
        const cplx u = eval_u_v(rt, p.omega0, t).u;
        mod_err = std::max(mod_err, std::abs(std::abs(u) -
                                             std::exp(-2.0 * rt.gamma0 * t)));
    }
    d = "t=0 deviation " + fmt(id_err) + ", |u| deviation " + fmt(mod_err);
    return id_err < 1e-14 && mod_err < 1e-12;
}

/*------------------------------ criterion 3 -------------------------------*/
// Trace/Hermiticity/positivity on 200 random states x 4 separations x 50 times.
bool crit3(std::string& d) {
    std::mt19937 rng(2024);
    std::normal_distribution<double> nd;
    std::vector<DensityMatrix4> states(200);
    for (auto& s : states) {
        Eigen::Matrix4cd a;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = cplx(nd(rng), nd(rng));
        s.m = a * a.adjoint();
        s.m /= s.m.trace();
        s.basis = Basis::computational;
    }
    double worst_tr = 0.0, worst_h = 0.0, worst_eig = 0.0;
    for (double w0r : {0.1, 1.0, 5.0, 50.0}) {
        const SystemParams p{0.1, 1.0, w0r};
        const Rates rt = compute_rates(p);
        for (int i = 1; i <= 50; ++i) {
            const double t = 10.0 * i / 50.0 / rt.gamma0;
            const PropagatorKernel k = eval_kernel(p, rt, t);
            for (const auto& s : states) {
                const DensityMatrix4 r = propagate(s, k, rt, t);
                worst_tr = std::max(worst_tr, r.trace_error());
                worst_h = std::max(worst_h, r.hermiticity_error());
                worst_eig = std::min(worst_eig, r.min_eigenvalue());
            }
        }
    }
    d = "trace err " + fmt(worst_tr) + ", herm err " + fmt(worst_h) +
        ", min eig " + fmt(worst_eig);
    return worst_tr < 1e-12 && worst_h < 1e-12 && worst_eig > -1e-9;
}

/*------------------------------ criterion 4 -------------------------------*/
// Subradiant concurrence decay and superradiant population decay exponent.
bool crit4(std::string& d) {
    double worst_c = 0.0, worst_fit = 0.0;
    for (double w0r : {0.5, 1.0, 2.0}) {
        const SystemParams p{0.1, 1.0, w0r};
        const Rates rt = compute_rates(p);
        const auto grid = uniform_grid(2.0 / rt.gamma0, 41);
        const Trajectory minus =
            evolve_scenario({ScenarioKind::bell_minus, 0.5, p}, grid);
        for (const auto& s : minus.samples)
            worst_c = std::max(
                worst_c,
                std::abs(concurrence(s.rho) -
                         std::exp(-2.0 * (rt.gamma0 - rt.gamma_r) * s.t)));
        // least-squares slope of log population of the |+> Bell state
        const Trajectory plus =
            evolve_scenario({ScenarioKind::bell_plus, 0.5, p}, grid);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& s : plus.samples) {
            if (s.t == 0.0) continue;
            const double pop = to_collective_basis(s.rho).m(2, 2).real();
            sx += s.t;
            sy += std::log(pop);
            sxx += s.t * s.t;
            sxy += s.t * std::log(pop);
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        worst_fit = std::max(
            worst_fit, std::abs(-slope / (2.0 * (rt.gamma0 + rt.gamma_r)) -
                                1.0));
    }
    d = "concurrence dev " + fmt(worst_c) + ", fitted-rate rel err " +
        fmt(worst_fit);
    return worst_c < 1e-10 && worst_fit < 1e-3;
}

/*------------------------------ criterion 5 -------------------------------*/
// Integrating the propagator-derived generator reproduces the closed form.
bool crit5(std::string& d) {
    const SystemParams p{0.1, 1.0, 1.0};
    const Rates rt = compute_rates(p);
    const ScenarioSpec spec{ScenarioKind::superposed_ground_doubly, 0.5, p};
    const auto grid = uniform_grid(5.0 / rt.gamma0, 26);
    const Trajectory me =
        integrate_master(build_initial(spec), p, grid,
                         GeneratorSource::propagator_derived, 1e-11);
    double sup = 0.0;
    for (const auto& s : me.samples) {
        const DensityMatrix4 ref = closed_form_state(spec, rt, s.t);
        sup = std::max(sup, (s.rho.m - ref.m).cwiseAbs().maxCoeff());
    }
    d = "sup-norm error " + fmt(sup);
    return sup < 1e-6;
}

/*------------------------------ criterion 6 -------------------------------*/
// Memoryless limit of the correction coefficients at gamma_r = sigma = 0.
bool crit6(std::string& d) {
    const SystemParams p{0.1, 1.0, kPi};  // sinc(omega0 r) = 0
    Rates rt = compute_rates(p);
    rt.gamma_r = 0.0;
    rt.sigma = 0.0;
    const AlphaCoefficients a = alpha_coefficients(rt, p, 10.0 / rt.gamma0);
    const cplx target[6] = {cplx(0.0), cplx(-2.0), cplx(2.0),
                            cplx(0.0), cplx(2.0),  cplx(2.0)};
    double worst = 0.0;
    std::ostringstream ss;
    for (int i = 0; i < 6; ++i) {
        const double dev = std::abs(a.alpha[i] - target[i]);
        worst = std::max(worst, dev);
        ss << (i ? ", " : "") << "|a" << i + 1 << "-target|=" << fmt(dev);
    }
    d = ss.str();
    return worst < 1e-3;
}

/*------------------------------ criterion 7 -------------------------------*/
// Semigroup vs resummed |+> population: factor > 10 apart at close
// separation, within 10% at omega0 r = 50.
bool crit7(std::string& d) {
    const SystemParams pa{0.1, 1.0, 0.1};
    const Rates ra = compute_rates(pa);
    DensityMatrix4 rho0;
    rho0.m(3, 3) = 1.0;
    const double t1 = 1.0 / ra.gamma0;
    const double nm_pp = to_collective_basis(
                             propagate(rho0, eval_kernel(pa, ra, t1), ra, t1))
                             .m(2, 2)
                             .real();
    const double ft_pp = cascade_from_doubly_excited(ra, 1.0, t1).p_plus;
    const double factor = ft_pp / nm_pp;

    const SystemParams pb{0.1, 1.0, 50.0};
    const Rates rb = compute_rates(pb);
    double worst = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double t = 5.0 * i / 50.0 / rb.gamma0;
        const double nm = to_collective_basis(
                              propagate(rho0, eval_kernel(pb, rb, t), rb, t))
                              .m(2, 2)
                              .real();
        const double ft = cascade_from_doubly_excited(rb, 1.0, t).p_plus;
        worst = std::max(worst, std::abs(nm - ft) / ft);
    }
    d = "close-separation factor " + fmt(factor) +
        ", omega0r=50 max rel dev " + fmt(worst);
    return factor > 10.0 && worst < 0.10;
}

/*------------------------------ criterion 8 -------------------------------*/
// Sudden-death phenomenology of the ground/doubly-excited superposition.
bool crit8(std::string& d) {
    const SystemParams p9{0.1, 1.0, 50.0};
    const Rates r9 = compute_rates(p9);
    const auto grid9 = uniform_grid(3.0 / r9.gamma0, 600);
    const ConcurrenceSeries cs9 = concurrence_series(
        evolve_scenario({ScenarioKind::superposed_ground_doubly, 0.9, p9},
                        grid9));
    const SuddenDeathReport rep9 = detect_sudden_death(cs9);
    const bool death_ok =
        rep9.death_time &&
        std::abs(r9.gamma0 * *rep9.death_time - 0.861211502516491) <
            0.02 * 0.861211502516491 &&
        !rep9.revival_time;

    bool no_death_low_p = true;
    std::ostringstream offenders;
    for (double w0r : {0.1, 1.0, 5.0, 50.0})
        for (double pw : {0.1, 0.3, 0.5}) {
            const SystemParams p{0.1, 1.0, w0r};
            const Rates rt = compute_rates(p);
            const auto grid = uniform_grid(6.0 / rt.gamma0, 300);
            const auto cs = concurrence_series(evolve_scenario(
                {ScenarioKind::superposed_ground_doubly, pw, p}, grid));
            if (cs.death_time) {
                no_death_low_p = false;
                offenders << " (omega0r=" << w0r << ", p=" << pw
                          << " dies at gamma0 t=" << fmt(rt.gamma0 *
                                                         *cs.death_time)
                          << ")";
            }
        }

    bool close_sep_clean = true;
    for (double w0r : {0.1, 0.5, 1.0})
        for (double pw : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const SystemParams p{0.1, 1.0, w0r};
            const Rates rt = compute_rates(p);
            const auto grid = uniform_grid(6.0 / rt.gamma0, 300);
            const auto cs = concurrence_series(evolve_scenario(
                {ScenarioKind::superposed_ground_doubly, pw, p}, grid));
            if (cs.death_time || cs.revival_detected) close_sep_clean = false;
        }
    d = std::string("death at gamma0 t = ") +
        (rep9.death_time ? fmt(r9.gamma0 * *rep9.death_time) : "none") +
        ", low-p clean " + (no_death_low_p ? "yes" : "no") +
        offenders.str() +
        ", close-separation clean " + (close_sep_clean ? "yes" : "no");
    return death_ok && no_death_low_p && close_sep_clean;
}

/*------------------------------ criterion 9 -------------------------------*/
// Decoherence: isolated-qubit behaviour at huge separation, protection at
// tiny separation.
bool crit9(std::string& d) {
    const SystemParams far{0.1, 1.0, 1000.0};
    const Rates rf = compute_rates(far);
    const auto grid = uniform_grid(3.0 / rf.gamma0, 31);
    const auto rows =
        decoherence_report({ScenarioKind::factorized_ground, 0.5, far}, grid);
    double worst = 0.0;
    for (const auto& r : rows)
        if (r.t > 0.0)
            worst = std::max(worst, std::abs(r.coherence_q1 -
                                             r.isolated_baseline) /
                                        r.isolated_baseline);
    const SystemParams near_p{0.1, 1.0, 0.01};
    const Rates rn = compute_rates(near_p);
    const std::vector<double> g2{0.0, 3.0 / rn.gamma0};
    const auto rows2 =
        decoherence_report({ScenarioKind::factorized_ground, 0.5, near_p}, g2);
    const double ratio = rows2.back().ratio_q1;
    d = "far-separation rel dev " + fmt(worst) + ", near-separation ratio " +
        fmt(ratio);
    return worst < 0.005 && ratio > 2.0;
}

/*------------------------------ criterion 10 ------------------------------*/
// Discretized-field cross-check at N = 2000 and a coupling sweep.
bool crit10(std::string& d) {
    const double lambdas[3] = {0.1, 0.05, 0.025};
    OracleAudit audits[3];
    for (int i = 0; i < 3; ++i) {
        std::fprintf(stderr, "criterion 10: auditing lambda = %g ...\n",
                     lambdas[i]);
        audits[i] = oracle_audit({lambdas[i], 1.0, 1.0}, 2000, -1.0, 3.0, 6,
                                 {});
    }
    const OracleAudit& a = audits[1];  // lambda = 0.05
    const bool amps_ok = a.err_u < 0.05 && a.err_v_plus < 0.05 &&
                         a.err_v_minus < 0.05 && a.err_bell_plus_pop < 0.05 &&
                         a.err_bell_minus_pop < 0.05;
    const bool feed_exact_ok = a.err_feed_plus_quadrature < 0.10;
    // the propagator's own (closed-form) feeding coefficient
    const bool feed_closed_ok = a.err_pop_plus_closed_kappa < 0.10;
    const auto errs = [](const OracleAudit& x) {
        return std::vector<double>{x.err_u,
                                   x.err_v_plus,
                                   x.err_v_minus,
                                   x.err_bell_plus_pop,
                                   x.err_bell_minus_pop,
                                   x.err_feed_plus_quadrature};
    };
    bool monotone = true;
    const char* names[] = {"u", "v+", "v-", "bell+", "bell-", "feed+"};
    std::ostringstream sweep;
    const auto e0 = errs(audits[0]), e1 = errs(audits[1]), e2 = errs(audits[2]);
    for (size_t j = 0; j < e0.size(); ++j) {
        const bool ok = e1[j] <= e0[j] && e2[j] <= e1[j];
        if (!ok) monotone = false;
        sweep << "; " << names[j] << " [" << fmt(e0[j]) << ", " << fmt(e1[j])
              << ", " << fmt(e2[j]) << "]" << (ok ? "" : " NOT MONOTONE");
    }
    d = "lambda=0.05: err_u " + fmt(a.err_u) + ", err_v+ " +
        fmt(a.err_v_plus) + ", err_v- " + fmt(a.err_v_minus) +
        ", bell pops " + fmt(a.err_bell_plus_pop) + "/" +
        fmt(a.err_bell_minus_pop) + ", feed(+) vs quadrature " +
        fmt(a.err_feed_plus_quadrature) + ", feed(+) vs closed form " +
        fmt(a.err_pop_plus_closed_kappa) + ", sweep monotone " +
        (monotone ? "yes" : "no") + " (lambda = 0.1, 0.05, 0.025)" +
        sweep.str();
    return amps_ok && feed_exact_ok && feed_closed_ok && monotone;
}

/*------------------------------ criterion 11 ------------------------------*/
// Population transfer matrix equals the exact subradiant population.
bool crit11(std::string& d) {
    double worst = 0.0;
    for (double w0r : {0.1, 1.0, 5.0})
        for (double p : {0.3, 1.0}) {
            const Rates rt = compute_rates({0.1, 1.0, w0r});
            const double g0 = rt.gamma0, gr = rt.gamma_r;
            for (int i = 1; i <= 40; ++i) {
                const double t = 8.0 * i / 40.0 / g0;
                const double tm =
                    cascade_from_doubly_excited(rt, p, t).p_minus;
                // exact subradiant population for p_-(0) = 0
                const double ft = p * (g0 - gr) / (g0 + gr) *
                                  (std::exp(-2.0 * (g0 - gr) * t) -
                                   std::exp(-4.0 * g0 * t));
                worst = std::max(worst, std::abs(tm - ft));
            }
        }
    d = "max |difference| " + fmt(worst);
    return worst < 1e-9;
}

}  // namespace

int main(int argc, char** argv) {
    using Crit = bool (*)(std::string&);
    const Crit crits[11] = {crit1, crit2, crit3, crit4, crit5, crit6,
                            crit7, crit8, crit9, crit10, crit11};
    std::vector<int> which;
    if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
        for (int i = 1; i <= 11; ++i) which.push_back(i);
    } else {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 11) {
            std::fprintf(stderr, "usage: %s <1..11>|all\n", argv[0]);
            return 2;
        }
        which.push_back(n);
    }
    int failed = 0;
    for (int n : which) {
        std::string detail;
        bool ok = false;
        try {
            ok = crits[n - 1](detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("CRITERION %d: %s — %s\n", n, ok ? "PASS" : "FAIL",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
