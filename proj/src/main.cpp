// Command-line front end: decay rates, trajectory evolution, concurrence
// figure data, semigroup comparison, decoherence tables and the
// discretized-field audit.  CSV output, JSON reports, JSON config files.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qed2q/csv.hpp"
#include "qed2q/entanglement.hpp"
#include "qed2q/evolution.hpp"
#include "qed2q/field_oracle.hpp"
#include "qed2q/markov.hpp"
#include "qed2q/master_eq.hpp"
#include "qed2q/scenarios.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using namespace qed2q;

struct Config {
    double lambda = 0.1;
    double omega0 = 1.0;
    double omega0r = 1.0;   // dimensionless separation
    double p = 0.5;
    double tmax_gamma = 5.0;
    int samples = 200;
    std::string scenario = "superposed";
    std::string model = "nonmarkov";
    std::string kappa = "closed";
    std::string out = "";
    std::string out_dir = ".";
    int figure = 1;
    int modes = 2000;
    double kmax_omega0 = 20.0;
    std::string nsweep = "";
    bool as_json = false;
    bool serial = false;
    int threads = 0;
};

SystemParams make_params(const Config& c) {
    SystemParams p;
    p.lambda = c.lambda;
    p.omega0 = c.omega0;
    p.r = c.omega0r / c.omega0;
    p.validate();
    if (!p.weak_coupling_ok())
        std::cerr << "warning: lambda^2 >= 0.1; the weak-coupling resummation "
                     "is unreliable here\n";
    if (!p.retardation_ok())
        std::cerr << "warning: lambda^2 * omega0 * r >= 1; retardation "
                     "corrections are not negligible here\n";
    return p;
}

ScenarioKind parse_scenario(const std::string& s) {
    if (s == "superposed") return ScenarioKind::superposed_ground_doubly;
    if (s == "bell-plus") return ScenarioKind::bell_plus;
    if (s == "bell-minus") return ScenarioKind::bell_minus;
    if (s == "fact-ground") return ScenarioKind::factorized_ground;
    if (s == "fact-excited") return ScenarioKind::factorized_excited;
    throw std::domain_error("unknown scenario: " + s);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          double gamma0) {
    CsvWriter csv(path);
    csv.header({"gamma0_t", "t", "rho_oo", "rho_mm", "rho_pp", "rho_ii",
                "re_rho_mo", "im_rho_mo", "re_rho_po", "im_rho_po",
                "re_rho_pm", "im_rho_pm", "re_rho_io", "im_rho_io",
                "re_rho_im", "im_rho_im", "re_rho_ip", "im_rho_ip",
                "concurrence", "trace_error", "min_eigenvalue"});
    for (const auto& s : traj.samples) {
        const Eigen::Matrix4cd m = s.rho.basis == Basis::collective
                                       ? s.rho.m
                                       : to_collective_basis(s.rho).m;
        const double c = concurrence(s.rho);
        const std::vector<double> row{
            gamma0 * s.t,       s.t,
            m(0, 0).real(),     m(1, 1).real(),
            m(2, 2).real(),     m(3, 3).real(),
            m(1, 0).real(),     m(1, 0).imag(),
            m(2, 0).real(),     m(2, 0).imag(),
            m(2, 1).real(),     m(2, 1).imag(),
            m(3, 0).real(),     m(3, 0).imag(),
            m(3, 1).real(),     m(3, 1).imag(),
            m(3, 2).real(),     m(3, 2).imag(),
            c,                  s.rho.trace_error(),
            s.rho.min_eigenvalue()};
        csv.row(row);
    }
}

int cmd_rates(const Config& c) {
    const SystemParams p = make_params(c);
    const Rates rt = compute_rates(p);
    if (c.as_json) {
        json j{{"lambda", p.lambda},   {"omega0", p.omega0},
               {"r", p.r},             {"gamma0", rt.gamma0},
               {"gamma_r", rt.gamma_r}, {"sigma", rt.sigma}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "gamma0  = " << rt.gamma0 << "\n"
                  << "gamma_r = " << rt.gamma_r << "\n"
                  << "sigma   = " << rt.sigma << "\n";
    }
    return 0;
}

int cmd_evolve(const Config& c) {
    const SystemParams p = make_params(c);
    const Rates rt = compute_rates(p);
    ScenarioSpec spec{parse_scenario(c.scenario), c.p, p};
    const auto tgrid = uniform_grid(c.tmax_gamma / rt.gamma0, c.samples);
    Trajectory traj;
    if (c.model == "nonmarkov") {
        const KappaSource src = c.kappa == "exact"
                                    ? KappaSource::exact_quadrature
                                    : KappaSource::closed_form;
        traj = propagate_grid(build_initial(spec), p, tgrid, src, !c.serial);
    } else if (c.model == "master") {
        traj = integrate_master(build_initial(spec), p, tgrid,
                                GeneratorSource::propagator_derived);
    } else if (c.model == "markov") {
        traj = lindblad_integrate(build_initial(spec), p, tgrid);
    } else {
        throw std::domain_error("unknown model: " + c.model);
    }
    const std::string out = c.out.empty() ? "trajectory.csv" : c.out;
    write_trajectory_csv(out, traj, rt.gamma0);
    json summary{{"out", out},
                 {"samples", traj.samples.size()},
                 {"worst_trace_error", traj.worst_trace_error},
                 {"worst_eigenvalue", traj.worst_eigenvalue},
                 {"positivity_violation", traj.positivity_violation}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_figure(const Config& c) {
    struct Curve {
        ScenarioKind kind;
        double p, omega0r;
        std::string name;
    };
    std::vector<Curve> curves;
    const auto tag = [](double v) {
        std::ostringstream os;
        os << v;
        std::string s = os.str();
        for (auto& ch : s)
            if (ch == '.') ch = 'p';
        return s;
    };
    switch (c.figure) {
        case 1:
            for (double w0r : {0.5, 1.0, 2.0, 3.141592653589793})
                curves.push_back({ScenarioKind::superposed_ground_doubly, 0.5,
                                  w0r, "fig1_w0r_" + tag(w0r)});
            break;
        case 2:
            for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
                curves.push_back({ScenarioKind::superposed_ground_doubly, p,
                                  1.0, "fig2_p_" + tag(p)});
            break;
        case 3:
            for (double w0r : {0.5, 1.0, 2.0})
                curves.push_back({ScenarioKind::bell_minus, 0.5, w0r,
                                  "fig3_w0r_" + tag(w0r)});
            break;
        case 4:
            for (double w0r : {0.5, 1.0, 2.0})
                curves.push_back({ScenarioKind::bell_plus, 0.5, w0r,
                                  "fig4_w0r_" + tag(w0r)});
            break;
        default:
            throw std::domain_error("figure must be 1..4");
    }
    for (const auto& cv : curves) {
        Config cc = c;
        cc.p = cv.p;
        cc.omega0r = cv.omega0r;
        const SystemParams p = make_params(cc);
        const Rates rt = compute_rates(p);
        const auto tgrid = uniform_grid(c.tmax_gamma / rt.gamma0, c.samples);
        const ScenarioSpec spec{cv.kind, cv.p, p};
        const Trajectory traj = evolve_scenario(spec, tgrid);
        const ConcurrenceSeries cs = concurrence_series(traj);
        CsvWriter csv(c.out_dir + "/" + cv.name + ".csv");
        csv.header({"gamma0_t", "concurrence"});
        for (size_t i = 0; i < cs.t.size(); ++i) {
            const std::vector<double> row{rt.gamma0 * cs.t[i], cs.value[i]};
            csv.row(row);
        }
        std::cout << cv.name << ": death="
                  << (cs.death_time ? std::to_string(rt.gamma0 * *cs.death_time)
                                    : "none")
                  << " revival=" << (cs.revival_detected ? "yes" : "no")
                  << "\n";
    }
    return 0;
}

int cmd_compare_markov(const Config& c) {
    const SystemParams p = make_params(c);
    const Rates rt = compute_rates(p);
    const auto tgrid = uniform_grid(c.tmax_gamma / rt.gamma0, c.samples);
    ScenarioSpec spec{ScenarioKind::superposed_ground_doubly, c.p, p};
    const Trajectory traj = evolve_scenario(spec, tgrid);
    const std::string out = c.out.empty() ? "compare_markov.csv" : c.out;
    CsvWriter csv(out);
    csv.header({"gamma0_t", "t", "nm_rho_pp", "nm_rho_mm", "mk_rho_pp",
                "mk_rho_mm", "ratio_pp", "ratio_mm"});
    double max_ratio_pp = 0.0, max_ratio_mm = 0.0;
    for (const auto& s : traj.samples) {
        const Eigen::Matrix4cd m = to_collective_basis(s.rho).m;
        const MarkovPopulations mk =
            cascade_from_doubly_excited(rt, c.p, s.t);
        const double nm_pp = m(2, 2).real(), nm_mm = m(1, 1).real();
        const double ratio_pp = nm_pp > 1e-300 ? mk.p_plus / nm_pp : 0.0;
        const double ratio_mm = nm_mm > 1e-300 ? mk.p_minus / nm_mm : 0.0;
        max_ratio_pp = std::max(max_ratio_pp, ratio_pp);
        max_ratio_mm = std::max(max_ratio_mm, ratio_mm);
        const std::vector<double> row{rt.gamma0 * s.t, s.t,     nm_pp,
                                      nm_mm,           mk.p_plus, mk.p_minus,
                                      ratio_pp,        ratio_mm};
        csv.row(row);
    }
    json j{{"out", out},
           {"max_ratio_pp", max_ratio_pp},
           {"max_ratio_mm", max_ratio_mm}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_decohere(const Config& c) {
    const SystemParams p = make_params(c);
    const Rates rt = compute_rates(p);
    ScenarioSpec spec{parse_scenario(c.scenario), c.p, p};
    const auto tgrid = uniform_grid(c.tmax_gamma / rt.gamma0, c.samples);
    const auto rows = decoherence_report(spec, tgrid);
    const std::string out = c.out.empty() ? "decoherence.csv" : c.out;
    CsvWriter csv(out);
    csv.header({"gamma0_t", "t", "coherence_q1", "coherence_q2",
                "isolated_baseline", "ratio_q1"});
    for (const auto& r : rows) {
        const std::vector<double> row{rt.gamma0 * r.t,    r.t,
                                      r.coherence_q1,     r.coherence_q2,
                                      r.isolated_baseline, r.ratio_q1};
        csv.row(row);
    }
    std::cout << json{{"out", out}, {"rows", rows.size()}}.dump(2) << "\n";
    return 0;
}

json audit_to_json(const OracleAudit& a) {
    return json{{"n_modes", a.n_modes},
                {"k_max", a.k_max},
                {"lambda", a.params.lambda},
                {"omega0_r", a.params.omega0 * a.params.r},
                {"delta_self", a.delta_self},
                {"sigma_disc", a.sigma_disc},
                {"gamma0_hat_rel_err", a.gamma0_hat_rel_err},
                {"gamma_r_hat_err", a.gamma_r_hat_err},
                {"err_u", a.err_u},
                {"err_v_plus", a.err_v_plus},
                {"err_v_minus", a.err_v_minus},
                {"err_bell_plus_pop", a.err_bell_plus_pop},
                {"err_bell_minus_pop", a.err_bell_minus_pop},
                {"err_pop_plus_semigroup", a.err_pop_plus_semigroup},
                {"err_pop_minus_semigroup", a.err_pop_minus_semigroup},
                {"err_pop_plus_closed_kappa", a.err_pop_plus_closed_kappa},
                {"err_feed_plus_quadrature", a.err_feed_plus_quadrature},
                {"dev_feed_minus_quadrature", a.dev_feed_minus_quadrature},
                {"max_norm_err_single", a.max_norm_err_single},
                {"max_norm_err_double", a.max_norm_err_double},
                {"worst_eigenvalue", a.worst_eigenvalue},
                {"worst_trace_err", a.worst_trace_err}};
}

int cmd_oracle_audit(const Config& c) {
    const SystemParams p = make_params(c);
    OracleOptions opt;
    opt.parallel = !c.serial;
    std::vector<int> nvals;
    if (!c.nsweep.empty()) {
        std::stringstream ss(c.nsweep);
        std::string tok;
        while (std::getline(ss, tok, ',')) nvals.push_back(std::stoi(tok));
    } else {
        nvals.push_back(c.modes);
    }
    json report = json::array();
    for (int nv : nvals) {
        const OracleAudit a = oracle_audit(p, nv, c.kmax_omega0 * p.omega0,
                                           c.tmax_gamma, c.samples, opt);
        report.push_back(audit_to_json(a));
        std::cerr << "audit N=" << nv << " done\n";
    }
    const json out_json =
        report.size() == 1 ? report[0] : json{{"sweep", report}};
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::binary);
        f << out_json.dump(2) << "\n";
    }
    std::cout << out_json.dump(2) << "\n";
    return 0;
}

void apply_config_file(Config& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::domain_error("cannot open config file: " + path);
    json j;
    f >> j;
    const auto get = [&j](const char* key, auto& dst) {
        if (j.contains(key)) dst = j[key].get<std::decay_t<decltype(dst)>>();
    };
    get("lambda", cfg.lambda);
    get("omega0", cfg.omega0);
    get("omega0r", cfg.omega0r);
    get("p", cfg.p);
    get("tmax-gamma", cfg.tmax_gamma);
    get("samples", cfg.samples);
    get("scenario", cfg.scenario);
    get("model", cfg.model);
    get("kappa", cfg.kappa);
    get("out", cfg.out);
    get("out-dir", cfg.out_dir);
    get("figure", cfg.figure);
    get("modes", cfg.modes);
    get("kmax-omega0", cfg.kmax_omega0);
    get("threads", cfg.threads);
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    // config file values act as defaults; explicit flags override them
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"two-emitter vacuum dynamics"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--threads", cfg.threads, "cap OpenMP thread count");

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "JSON config file (flags override its values)");
        sub->add_option("--threads", cfg.threads, "cap OpenMP thread count");
        sub->add_option("--lambda", cfg.lambda, "coupling constant");
        sub->add_option("--omega0", cfg.omega0, "transition frequency");
        sub->add_option("--omega0r", cfg.omega0r,
                        "dimensionless separation omega0*r");
    };
    auto* s_rates = app.add_subcommand("rates", "print the collective rates");
    add_common(s_rates);
    s_rates->add_flag("--json", cfg.as_json, "JSON output");

    auto* s_evolve = app.add_subcommand("evolve", "evolve a scenario");
    add_common(s_evolve);
    s_evolve->add_option("--scenario", cfg.scenario,
                         "superposed|bell-plus|bell-minus|fact-ground|fact-excited");
    s_evolve->add_option("--p", cfg.p, "excited weight");
    s_evolve->add_option("--tmax-gamma", cfg.tmax_gamma, "t_max in 1/gamma0");
    s_evolve->add_option("--samples", cfg.samples, "sample count");
    s_evolve->add_option("--model", cfg.model, "nonmarkov|master|markov");
    s_evolve->add_option("--kappa", cfg.kappa, "closed|exact");
    s_evolve->add_option("--out", cfg.out, "output CSV");
    s_evolve->add_flag("--serial", cfg.serial, "disable OpenMP");

    auto* s_fig = app.add_subcommand("figure", "concurrence curve families");
    add_common(s_fig);
    s_fig->add_option("--n", cfg.figure, "figure number 1..4");
    s_fig->add_option("--tmax-gamma", cfg.tmax_gamma, "t_max in 1/gamma0");
    s_fig->add_option("--samples", cfg.samples, "sample count");
    s_fig->add_option("--out-dir", cfg.out_dir, "output directory");

    auto* s_cmp = app.add_subcommand("compare-markov",
                                     "resummed vs semigroup populations");
    add_common(s_cmp);
    s_cmp->add_option("--p", cfg.p, "doubly excited weight");
    s_cmp->add_option("--tmax-gamma", cfg.tmax_gamma, "t_max in 1/gamma0");
    s_cmp->add_option("--samples", cfg.samples, "sample count");
    s_cmp->add_option("--out", cfg.out, "output CSV");

    auto* s_dec = app.add_subcommand("decohere",
                                     "vacuum-induced decoherence table");
    add_common(s_dec);
    s_dec->add_option("--scenario", cfg.scenario, "fact-ground|fact-excited");
    s_dec->add_option("--p", cfg.p, "excited weight");
    s_dec->add_option("--tmax-gamma", cfg.tmax_gamma, "t_max in 1/gamma0");
    s_dec->add_option("--samples", cfg.samples, "sample count");
    s_dec->add_option("--out", cfg.out, "output CSV");

    auto* s_oracle = app.add_subcommand("oracle-audit",
                                        "discretized-field cross-check");
    add_common(s_oracle);
    s_oracle->add_option("--modes", cfg.modes, "radial mode count");
    s_oracle->add_option("--kmax-omega0", cfg.kmax_omega0,
                         "mode cutoff in units of omega0");
    s_oracle->add_option("--tmax-gamma", cfg.tmax_gamma, "t_max in 1/gamma0");
    s_oracle->add_option("--samples", cfg.samples, "sample count");
    s_oracle->add_option("--nsweep", cfg.nsweep,
                         "comma-separated mode counts for a convergence sweep");
    s_oracle->add_option("--out", cfg.out, "JSON report path");
    s_oracle->add_flag("--serial", cfg.serial, "disable OpenMP");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cfg.threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(cfg.threads);
#endif
    } else if (const char* env = std::getenv("QED2Q_THREADS")) {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, std::atoi(env)));
#endif
        (void)env;
    }

    try {
        if (s_rates->parsed()) return cmd_rates(cfg);
        if (s_evolve->parsed()) return cmd_evolve(cfg);
        if (s_fig->parsed()) return cmd_figure(cfg);
        if (s_cmp->parsed()) return cmd_compare_markov(cfg);
        if (s_dec->parsed()) return cmd_decohere(cfg);
        if (s_oracle->parsed()) return cmd_oracle_audit(cfg);
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
