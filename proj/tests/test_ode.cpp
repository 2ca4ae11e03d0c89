#include <cmath>
#include <complex>
#include <stdexcept>

#include <doctest.h>

#include "qed2q/ode.hpp"

using cplx = std::complex<double>;

TEST_SUITE("ode") {

TEST_CASE("exponential decay") {
    Eigen::VectorXcd y(1);
    y << cplx(1.0, 0.0);
    qed2q::ode::integrate(
        [](double, const Eigen::VectorXcd& v, Eigen::VectorXcd& d) {
            d = -2.0 * v;
        },
        y, 0.0, 3.0);
    CHECK(std::abs(y[0] - std::exp(-6.0)) < 1e-10);
}

TEST_CASE("oscillator preserves norm and phase") {
    Eigen::VectorXcd y(1);
    y << cplx(1.0, 0.0);
    const cplx iw(0.0, 5.0);
    qed2q::ode::integrate(
        [iw](double, const Eigen::VectorXcd& v, Eigen::VectorXcd& d) {
            d = -iw * v;
        },
        y, 0.0, 10.0, {.rel_tol = 1e-11, .abs_tol = 1e-14});
    CHECK(std::abs(std::abs(y[0]) - 1.0) < 1e-9);
    CHECK(std::abs(y[0] - std::exp(-iw * 10.0)) < 1e-8);
}

TEST_CASE("tolerance controls the error") {
    const auto run = [](double rel_tol) {
        Eigen::VectorXcd y(2);
        y << cplx(1.0, 0.0), cplx(0.0, 0.0);
        // y'' = -y via first-order system; exact y0(t) = cos t
        qed2q::ode::integrate(
            [](double, const Eigen::VectorXcd& v, Eigen::VectorXcd& d) {
                d.resize(2);
                d[0] = v[1];
                d[1] = -v[0];
            },
            y, 0.0, 20.0, {.rel_tol = rel_tol, .abs_tol = 1e-16});
        return std::abs(y[0] - std::cos(20.0));
    };
    const double loose = run(1e-5), tight = run(1e-10);
    CHECK(tight < 1e-7);
    CHECK(tight < loose);
}

TEST_CASE("bad time span is rejected") {
    Eigen::VectorXcd y(1);
    y << cplx(1.0, 0.0);
    CHECK_THROWS_AS(
        qed2q::ode::integrate(
            [](double, const Eigen::VectorXcd& v, Eigen::VectorXcd& d) {
                d = v;
            },
            y, 1.0, 0.0),
        std::invalid_argument);
}

TEST_CASE("step budget is enforced") {
    Eigen::VectorXcd y(1);
    y << cplx(1.0, 0.0);
    qed2q::ode::Options opt;
    opt.max_steps = 3;
    CHECK_THROWS_AS(
        qed2q::ode::integrate(
            [](double, const Eigen::VectorXcd& v, Eigen::VectorXcd& d) {
                d = -cplx(0.0, 100.0) * v;
            },
            y, 0.0, 100.0, opt),
        std::runtime_error);
}

}  // TEST_SUITE
