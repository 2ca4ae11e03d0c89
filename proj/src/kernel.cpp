#include "qed2q/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qed2q/special.hpp"

namespace qed2q {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

void check_time(double t, const char* fn) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error(std::string(fn) + ": t must be finite and >= 0");
}

}  // namespace

cplx sub_channel_amplitude(const Rates& rt, double omega0, double t) {
    check_time(t, "sub_channel_amplitude");
    return std::exp(-kI * (omega0 + rt.sigma) * t -
                    (rt.gamma0 - rt.gamma_r) * t);
}

cplx super_channel_amplitude(const Rates& rt, double omega0, double t) {
    check_time(t, "super_channel_amplitude");
    return std::exp(-kI * (omega0 - rt.sigma) * t -
                    (rt.gamma0 + rt.gamma_r) * t);
}

UV eval_u_v(const Rates& rt, double omega0, double t) {
    check_time(t, "eval_u_v");
    UV out;
    out.u = std::exp(-2.0 * kI * omega0 * t - 2.0 * rt.gamma0 * t);
    const cplx a_sub = sub_channel_amplitude(rt, omega0, t);
    const cplx a_sup = super_channel_amplitude(rt, omega0, t);
    out.v_plus = 0.5 * (a_sup + a_sub);
    out.v_minus = 0.5 * (a_sup - a_sub);
    return out;
}

double kappa_base(const Rates& rt, double t) {
    check_time(t, "kappa_base");
    const double d = rt.gamma0 - rt.gamma_r;
    if (std::abs(d) < 1e-6 * rt.gamma0) {
        // Degenerate-rate series; the leading cancellation is removed by hand.
        return d * t * t * std::exp(-4.0 * rt.gamma0 * t) * (1.0 + d * t);
    }
    const double e = std::expm1(d * t);
    return std::exp(-4.0 * rt.gamma0 * t) * e * e / d;
}

double kappa_base_dot(const Rates& rt, double t) {
    check_time(t, "kappa_base_dot");
    const double d = rt.gamma0 - rt.gamma_r;
    const double g4 = 4.0 * rt.gamma0;
    if (std::abs(d) < 1e-6 * rt.gamma0) {
        return d * std::exp(-g4 * t) * (2.0 * t - g4 * t * t + 3.0 * d * t * t);
    }
    const double e = std::expm1(d * t);
    return std::exp(-g4 * t) * (-g4 * e * e / d + 2.0 * e * (e + 1.0));
}

KappaPair eval_kappa_closed(const Rates& rt, double t) {
    const double k = kappa_base(rt, t);
    return {rt.gamma0 * k, rt.gamma_r * k};
}

KappaPair eval_kappa_exact(const SystemParams& p, const Rates& rt, double t,
                           const KappaExactOptions& opt) {
    check_time(t, "eval_kappa_exact");
    p.validate();
    double k_max = opt.k_max > 0.0 ? opt.k_max : 50.0 * p.omega0;
    if (k_max < 20.0 * p.omega0)
        throw std::domain_error("eval_kappa_exact: k_max must be >= 20*omega0");
    if (!(opt.rel_tol > 0.0) || opt.rel_tol > 1e-2)
        throw std::domain_error("eval_kappa_exact: rel_tol must be in (0, 1e-2]");
    if (t == 0.0) return {0.0, 0.0};

    const double g0 = rt.gamma0, gr = rt.gamma_r, sg = rt.sigma;
    const double d2 = (g0 - gr) * (g0 - gr);
    const double e0 = std::exp(-2.0 * g0 * t);
    const double er = std::exp(-2.0 * gr * t);
    const double ec = 2.0 * std::exp(-(g0 + gr) * t);
    const double w0 = p.omega0, r = p.r;
    const double lam2 = p.lambda * p.lambda;

    const auto numerator = [&](double k) {
        return e0 + er - ec * std::cos((w0 - k - sg) * t);
    };
    const auto lorentz = [&](double k) {
        const double dk = k - w0 + sg;
        return 1.0 / (dk * dk + d2 + 1e-280);
    };
    // kappa1 integrand ~ k N/D, kappa2 integrand ~ k sinc(k r) N/D.
    const auto f1 = [&](double k) { return k * numerator(k) * lorentz(k); };
    const auto f2 = [&](double k) {
        return k * sinc_unnormalized(k * r) * numerator(k) * lorentz(k);
    };

    struct Est {
        double value, err;
        bool converged;
    };
    const auto integrate = [&](const std::function<double(double)>& f,
                               double cutoff) -> Est {
        // Pre-split around the resonance: the cosine ripples with k-period
        // 2 pi / t, and the Lorentzian core has width ~ |gamma0 - gamma_r|.
        const double t_eff = std::max(t, 1.0 / w0);
        const double center = std::clamp(w0 - sg, 0.0, cutoff);
        double w = 200.0 * std::max(std::abs(g0 - gr), g0) + 40.0 * kPi / t_eff;
        w = std::min(w, 0.999 * std::min(center, cutoff - center));
        std::vector<double> edges{0.0};
        const auto push_uniform = [&](double a, double b, int n) {
            for (int i = 1; i <= n; ++i)
                edges.push_back(a + (b - a) * i / n);
        };
        if (w > 0.0) {
            push_uniform(0.0, center - w, 16);
            push_uniform(center - w, center + w, 96);
            push_uniform(center + w, cutoff, 16);
        } else {
            push_uniform(0.0, cutoff, 128);
        }
        // First pass: rough magnitude to set the absolute budget.
        double rough = 0.0;
        std::vector<double> panel_rough(edges.size() - 1);
        for (size_t i = 0; i + 1 < edges.size(); ++i) {
            double e;
            panel_rough[i] = quad::gk15_panel(f, edges[i], edges[i + 1], e);
            rough += std::abs(panel_rough[i]);
        }
        rough = std::max(rough, 1e-300);
        Est out{0.0, 0.0, true};
        const double n_panels = static_cast<double>(panel_rough.size());
        for (size_t i = 0; i + 1 < edges.size(); ++i) {
            const double budget =
                opt.rel_tol * (std::abs(panel_rough[i]) + rough / n_panels) * 0.5;
            auto res = quad::adaptive_gk15(f, edges[i], edges[i + 1], budget);
            out.value += res.value;
            out.err += res.error_estimate;
            out.converged = out.converged && res.converged;
        }
        return out;
    };

    const auto run = [&](double cutoff) -> KappaPair {
        const Est i1 = integrate(f1, cutoff);
        const Est i2 = integrate(f2, cutoff);
        const double achieved =
            std::max(i1.err / std::max(std::abs(i1.value), 1e-300),
                     i2.err / std::max(std::abs(i2.value), 1e-300));
        if (!i1.converged || !i2.converged || achieved > 10.0 * opt.rel_tol)
            throw std::runtime_error(
                "eval_kappa_exact: quadrature did not converge; achieved relative "
                "tolerance " + std::to_string(achieved));
        const double c1 = lam2 / (2.0 * kPi * kPi) * e0;
        return {c1 * i1.value, c1 * i2.value};
    };

    KappaPair kp = run(k_max);
    if (opt.doubling_check) {
        const KappaPair kp2 = run(2.0 * k_max);
        const double drift =
            std::max(std::abs(kp2.kappa1 - kp.kappa1) /
                         std::max(std::abs(kp2.kappa1), 1e-300),
                     std::abs(kp2.kappa2 - kp.kappa2) /
                         std::max(std::abs(kp2.kappa2), 1e-300));
        if (drift > opt.doubling_tol)
            throw std::runtime_error(
                "eval_kappa_exact: cutoff-doubling drift " + std::to_string(drift) +
                " exceeds tolerance");
    }
    return kp;
}

namespace {

struct MunuParts {
    cplx pref, a, b, c, a_dot, b_dot, c_dot;
};

MunuParts munu_parts(const Rates& rt, const SystemParams& p, double t) {
    const double x = p.omega0 * p.r;
    const double s = (x < 1e-8) ? 1.0 : sinc_unnormalized(x);
    const double g0 = rt.gamma0, gr = rt.gamma_r, sg = rt.sigma;
    MunuParts mp;
    mp.pref = 1.0 / cplx{g0 + 2.0 * s * gr, -sg * (1.0 + 2.0 * s)};
    const cplx ea = -kI * p.omega0 - g0;
    mp.a = std::exp(ea * t);
    mp.a_dot = ea * mp.a;
    mp.b = std::exp(-g0 * t) - std::exp(-gr * t);
    mp.b_dot = -g0 * std::exp(-g0 * t) + gr * std::exp(-gr * t);
    const cplx ec1 = -g0 - 2.0 * s * (gr - kI * sg);
    mp.c = std::exp(ec1 * t) - std::exp(kI * sg * t);
    mp.c_dot = ec1 * std::exp(ec1 * t) - kI * sg * std::exp(kI * sg * t);
    return mp;
}

}  // namespace

cplx munu(const Rates& rt, const SystemParams& p, double t) {
    check_time(t, "munu");
    const MunuParts mp = munu_parts(rt, p, t);
    return mp.pref * mp.a * mp.b * mp.c;
}

cplx munu_dot(const Rates& rt, const SystemParams& p, double t) {
    check_time(t, "munu_dot");
    const MunuParts mp = munu_parts(rt, p, t);
    return mp.pref *
           (mp.a_dot * mp.b * mp.c + mp.a * mp.b_dot * mp.c + mp.a * mp.b * mp.c_dot);
}

MuPair eval_mu_nu(const Rates& rt, const SystemParams& p, double t) {
    const cplx m = munu(rt, p, t);
    return {rt.gamma0 * m, rt.gamma_r * m};
}

PropagatorKernel eval_kernel(const SystemParams& p, const Rates& rt, double t,
                             KappaSource source) {
    check_time(t, "eval_kernel");
    PropagatorKernel k;
    k.t = t;
    k.uv = eval_u_v(rt, p.omega0, t);
    k.kappa = (source == KappaSource::closed_form)
                  ? eval_kappa_closed(rt, t)
                  : eval_kappa_exact(p, rt, t);
    k.mu = eval_mu_nu(rt, p, t);
    return k;
}

}  // namespace qed2q
