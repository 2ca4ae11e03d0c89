#include "qed2q/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qed2q {

namespace {

void check_arg(double x, const char* fn) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(fn) + ": non-finite argument");
    if (x < 0.0) throw std::domain_error(std::string(fn) + ": argument must be non-negative");
}

// Maclaurin series, adequate to ~1e-16 relative for x <= 10.
double si_series(double x) {
    double term = x;         // k = 0 term: x / (1 * 1!)
    double sum = term;
    const double x2 = x * x;
    for (int k = 0; k < 60; ++k) {
        const double tk = 2.0 * k + 1.0;
        term *= -x2 * tk / ((tk + 2.0) * (tk + 2.0) * (tk + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double cin_series(double x) {
    const double x2 = x * x;
    double term = x2 / 4.0;  // k = 1 term: x^2 / (2 * 2!)
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        const double tk = 2.0 * k;
        term *= -x2 * tk / ((tk + 2.0) * (tk + 2.0) * (tk + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

constexpr double kSeriesCut = 10.0;

// Continuation beyond the series region: fixed GK15 panels of width <= pi.
// The integrands are smooth there, so each panel is accurate to ~1e-15.
double continue_integral(const std::function<double(double)>& f, double from,
                         double to) {
    double total = 0.0;
    const double pi = 3.14159265358979323846;
    double a = from;
    while (a < to) {
        const double b = std::min(a + pi, to);
        double err = 0.0;
        total += quad::gk15_panel(f, a, b, err);
        a = b;
    }
    return total;
}

}  // namespace

double sinc_unnormalized(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double sine_integral(double x) {
    check_arg(x, "sine_integral");
    if (x <= kSeriesCut) return si_series(x);
    static const double si10 = si_series(kSeriesCut);
    return si10 + continue_integral(
                      [](double z) { return std::sin(z) / z; }, kSeriesCut, x);
}

double cin_integral(double x) {
    check_arg(x, "cin_integral");
    if (x <= kSeriesCut) return cin_series(x);
    static const double cin10 = cin_series(kSeriesCut);
    return cin10 + continue_integral(
                       [](double z) { return (1.0 - std::cos(z)) / z; },
                       kSeriesCut, x);
}

namespace quad {

namespace {
// Gauss-Kronrod 7-15 abscissae/weights on [-1,1] (positive half).
constexpr double xgk[8] = {
    0.991455371120812639206854697526, 0.949107912342758524526189684048,
    0.864864423359769072789712788641, 0.741531185599394439863864773281,
    0.586087235467691130294144838259, 0.405845151377397166906606412077,
    0.207784955007898467600689403773, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace

double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 7; ++i) kron += wgk[i] * (fv[i] + fv[14 - i]);
    kron += wgk[7] * fv[7];
    // Gauss points are the odd-index Kronrod points.
    for (int i = 0; i < 3; ++i) gauss += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    gauss += wg[3] * fv[7];
    kron *= h;
    gauss *= h;
    err = std::abs(kron - gauss);
    return kron;
}

QuadResult adaptive_gk15(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_depth) {
    QuadResult res;
    struct Panel {
        double a, b, tol;
        int depth;
    };
    std::vector<Panel> stack{{a, b, abs_tol, 0}};
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double val = gk15_panel(f, p.a, p.b, err);
        if (err <= p.tol || p.depth >= max_depth) {
            if (err > p.tol) res.converged = false;
            res.value += val;
            res.error_estimate += err;
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        stack.push_back({p.a, m, 0.5 * p.tol, p.depth + 1});
        stack.push_back({m, p.b, 0.5 * p.tol, p.depth + 1});
    }
    return res;
}

}  // namespace quad
}  // namespace qed2q
