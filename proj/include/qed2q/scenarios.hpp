/******************************************************************************
 * scenarios.hpp
 *
 * Canonical initial-state scenarios, their closed-form evolutions (used as
 * cross-checks against the generic propagator), single-qubit reductions and
 * the vacuum-induced decoherence report.
 ******************************************************************************/
#pragma once

#include <span>
#include <vector>

#include "qed2q/evolution.hpp"

namespace qed2q {

enum class ScenarioKind {
    superposed_ground_doubly,  ///< sqrt(1-p)|O> + sqrt(p)|I>
    bell_plus,                 ///< |+>
    bell_minus,                ///< |->
    factorized_ground,         ///< (sqrt(p)|1> + sqrt(1-p)|0>) (x) |0>
    factorized_excited         ///< (sqrt(p)|1> + sqrt(1-p)|0>) (x) |1>
};

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::superposed_ground_doubly;
    double p = 0.5;  ///< excited weight where applicable
    SystemParams params;
};

/// Initial density matrix (computational basis).  p outside [0,1] throws.
DensityMatrix4 build_initial(const ScenarioSpec& spec);

/// Closed-form evolved state at time t (computational basis).
DensityMatrix4 closed_form_state(const ScenarioSpec& spec, const Rates& rt,
                                 double t);

/// Evolves the scenario with the generic propagator.  With cross_check set,
/// every sample is compared element-wise against the scenario's closed form
/// and a std::logic_error is thrown on disagreement beyond tol.
Trajectory evolve_scenario(const ScenarioSpec& spec,
                           std::span<const double> tgrid,
                           bool cross_check = false, double tol = 1e-10);

/// Partial trace onto one qubit (which = 1 or 2).
Eigen::Matrix2cd reduce_qubit(const DensityMatrix4& rho, int which);

/// Off-diagonal magnitude |<0| rho_single |1>| of a single-qubit state.
double qubit_coherence(const Eigen::Matrix2cd& rho1);

struct DecoherenceRow {
    double t = 0.0;
    double coherence_q1 = 0.0;
    double coherence_q2 = 0.0;
    double isolated_baseline = 0.0;  ///< sqrt(p(1-p)) e^{-gamma0 t}
    double ratio_q1 = 0.0;           ///< coherence_q1 / baseline
};

/// Vacuum-induced single-qubit decoherence of the factorized scenarios,
/// tabulated against the isolated-emitter baseline.
std::vector<DecoherenceRow> decoherence_report(const ScenarioSpec& spec,
                                               std::span<const double> tgrid);

}  // namespace qed2q
