/******************************************************************************
 * ode.hpp
 *
 * Embedded Dormand-Prince 5(4) integrator with adaptive step size, for
 * complex vector ODEs y' = f(t, y).  Header-only.
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace qed2q::ode {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  ///< 0: pick automatically
    long max_steps = 50'000'000;
};

/// Advances y in place from t0 to t1.  RHS signature:
///   void f(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt)
template <class RHS>
void integrate(RHS&& f, Eigen::VectorXcd& y, double t0, double t1,
               const Options& opt = {}) {
    if (t1 < t0) throw std::invalid_argument("ode::integrate: t1 < t0");
    if (t1 == t0) return;

    // Dormand-Prince RK5(4)7M tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th-order weights (for the error estimate)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const auto n = y.size();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n),
        ynew(n);

    double t = t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : (t1 - t0) * 1e-4;
    h = std::min(h, t1 - t0);

    f(t, y, k1);
    for (long step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) return;
        h = std::min(h, t1 - t);

        yt = y + h * (a21 * k1);
        f(t + c2 * h, yt, k2);
        yt = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, yt, k3);
        yt = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, yt, k4);
        yt = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, yt, k5);
        yt = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, yt, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);

        // error estimate against the embedded 4th-order solution
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ei =
                std::abs(h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]));
            const double sc = opt.abs_tol +
                              opt.rel_tol * std::max(std::abs(y[i]),
                                                     std::abs(ynew[i]));
            err = std::max(err, ei / sc);
        }
        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::runtime_error("ode::integrate: step size underflow");
    }
    throw std::runtime_error("ode::integrate: max step count exceeded");
}

}  // namespace qed2q::ode
