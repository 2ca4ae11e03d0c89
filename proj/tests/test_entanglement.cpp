#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "qed2q/entanglement.hpp"
#include "qed2q/scenarios.hpp"

using namespace qed2q;

TEST_SUITE("entanglement") {

TEST_CASE("concurrence of standard states") {
    // Bell state
    DensityMatrix4 bell;
    bell.m(1, 1) = bell.m(2, 2) = 0.5;
    bell.m(1, 2) = bell.m(2, 1) = 0.5;
    CHECK(concurrence(bell) == doctest::Approx(1.0).epsilon(1e-12));

    // product state
    DensityMatrix4 prod;
    prod.m(0, 0) = 1.0;
    CHECK(concurrence(prod) == doctest::Approx(0.0).epsilon(1e-10));

    // maximally mixed
    DensityMatrix4 mixed;
    mixed.m = Eigen::Matrix4cd::Identity() * 0.25;
    CHECK(concurrence(mixed) == doctest::Approx(0.0).epsilon(1e-10));

    // Werner family: C = max(0, (3w - 1)/2)
    for (double w : {0.2, 0.5, 0.8}) {
        DensityMatrix4 werner;
        werner.m = (1.0 - w) * Eigen::Matrix4cd::Identity() * 0.25 +
                   w * bell.m;
        CHECK(concurrence(werner) ==
              doctest::Approx(std::max(0.0, (3.0 * w - 1.0) / 2.0))
                  .epsilon(1e-9));
    }
}

TEST_CASE("concurrence rejects invalid states") {
    DensityMatrix4 bad;
    bad.m(0, 0) = 2.0;  // trace 2
    CHECK_THROWS_AS(concurrence(bad), std::domain_error);
}

TEST_CASE("sudden death of the doubly-excited superposition at large separation") {
    // weight 0.9 on |11>, omega0 r = 50: entanglement dies at
    // gamma0 t = 0.8612 (reference: root of the closed-form concurrence)
    const SystemParams p{0.1, 1.0, 50.0};
    const Rates rt = compute_rates(p);
    const ScenarioSpec spec{ScenarioKind::superposed_ground_doubly, 0.9, p};
    const auto grid = uniform_grid(3.0 / rt.gamma0, 400);
    const ConcurrenceSeries cs = concurrence_series(evolve_scenario(spec, grid));
    const SuddenDeathReport rep = detect_sudden_death(cs);
    CHECK(rep.classification != DecayClass::smooth_decay);
    REQUIRE(rep.death_time.has_value());
    CHECK(rt.gamma0 * *rep.death_time ==
          doctest::Approx(0.861211502516491).epsilon(0.02));
}

TEST_CASE("small weight at moderate separation decays smoothly") {
    const SystemParams p{0.1, 1.0, 1.0};
    const Rates rt = compute_rates(p);
    const ScenarioSpec spec{ScenarioKind::superposed_ground_doubly, 0.3, p};
    const auto grid = uniform_grid(6.0 / rt.gamma0, 300);
    const ConcurrenceSeries cs = concurrence_series(evolve_scenario(spec, grid));
    const SuddenDeathReport rep = detect_sudden_death(cs);
    CHECK(rep.classification == DecayClass::smooth_decay);
    CHECK_FALSE(rep.death_time.has_value());
}

TEST_CASE("subradiant Bell state retains entanglement at close separation") {
    const SystemParams p{0.1, 1.0, 0.1};
    const Rates rt = compute_rates(p);
    const ScenarioSpec spec{ScenarioKind::bell_minus, 0.5, p};
    const auto grid = uniform_grid(5.0 / rt.gamma0, 11);
    const Trajectory traj = evolve_scenario(spec, grid);
    CHECK(concurrence(traj.samples.back().rho) ==
          doctest::Approx(0.983479647500137).epsilon(1e-9));
}

TEST_CASE("death window requires sustained zeros") {
    ConcurrenceSeries cs;
    for (int i = 0; i < 20; ++i) {
        cs.t.push_back(i);
        // a two-sample dip is noise, not death
        cs.value.push_back(i == 5 || i == 6 ? 0.0 : 0.1);
    }
    annotate_series(cs);
    CHECK_FALSE(detect_sudden_death(cs).death_time.has_value());
    // ... but five consecutive floor samples count
    ConcurrenceSeries dead;
    for (int i = 0; i < 20; ++i) {
        dead.t.push_back(i);
        dead.value.push_back(i >= 10 ? 0.0 : 0.1);
    }
    annotate_series(dead);
    const SuddenDeathReport rep = detect_sudden_death(dead);
    REQUIRE(rep.death_time.has_value());
    CHECK(*rep.death_time == doctest::Approx(10.0));
    CHECK(rep.classification == DecayClass::sudden_death);
    // revival
    ConcurrenceSeries rev = dead;
    rev.value[18] = 0.05;
    annotate_series(rev);
    const SuddenDeathReport rr = detect_sudden_death(rev);
    CHECK(rr.classification == DecayClass::sudden_death_with_revival);
    REQUIRE(rr.revival_time.has_value());
    CHECK(*rr.revival_time == doctest::Approx(18.0));
}

}  // TEST_SUITE
