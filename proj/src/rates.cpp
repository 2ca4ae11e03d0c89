#include "qed2q/rates.hpp"

#include <cmath>

#include "qed2q/special.hpp"

namespace qed2q {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void SystemParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("SystemParams: lambda must be positive and finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::domain_error("SystemParams: omega0 must be positive and finite");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::domain_error("SystemParams: r must be non-negative and finite");
}

Rates compute_rates(const SystemParams& p) {
    p.validate();
    Rates rt = rates_with_sigma_override(p, 0.0);

    if (p.r == 0.0)
        throw std::domain_error(
            "compute_rates: sigma diverges; physical r must exceed the Bohr radius");

    const double x = p.omega0 * p.r;
    const double pref = p.lambda * p.lambda / (2.0 * kPi * kPi * p.r);
    rt.sigma = pref * (-std::cos(x) * (kPi / 2.0 - sine_integral(x)) +
                       std::sin(x) * (std::log(x) + euler_gamma + cin_integral(x)));
    return rt;
}

Rates rates_with_sigma_override(const SystemParams& p, double sigma) {
    p.validate();
    Rates rt;
    rt.gamma0 = p.lambda * p.lambda * p.omega0 / (2.0 * kPi);
    const double x = p.omega0 * p.r;
    // Cross rate tends to gamma0 as the separation vanishes.
    rt.gamma_r = (x < 1e-8)
                     ? rt.gamma0
                     : p.lambda * p.lambda * std::sin(x) / (2.0 * kPi * p.r);
    rt.sigma = sigma;
    return rt;
}

}  // namespace qed2q
