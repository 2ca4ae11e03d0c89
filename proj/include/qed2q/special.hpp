/******************************************************************************
 * special.hpp
 *
 * Trigonometric integrals Si(x), Cin(x) and an adaptive Gauss-Kronrod
 * quadrature used throughout the library.
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace qed2q {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286061;

/// Sine integral Si(x) = \int_0^x sin(z)/z dz.  Requires x >= 0 and finite.
/// Absolute error <= 1e-10 over the supported range.
double sine_integral(double x);

/// Entire cosine integral Cin(x) = \int_0^x (1 - cos(z))/z dz.  x >= 0, finite.
double cin_integral(double x);

/// sin(x)/x with the correct x -> 0 limit.
double sinc_unnormalized(double x);

namespace quad {

/// Result of an adaptive quadrature pass.
struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  ///< accumulated Kronrod error estimate
    bool converged = true;
};

/// 15-point Gauss-Kronrod rule on [a,b]; err receives |K15 - G7|.
double gk15_panel(const std::function<double(double)>& f, double a, double b,
                  double& err);

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Splits panels until the local estimate meets the (geometrically divided)
/// tolerance budget or max_depth is reached.  `converged` is cleared when
/// any panel bottoms out with a bad estimate.
QuadResult adaptive_gk15(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_depth = 42);

}  // namespace quad
}  // namespace qed2q
