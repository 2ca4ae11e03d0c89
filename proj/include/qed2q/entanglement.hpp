/******************************************************************************
 * entanglement.hpp
 *
 * Two-qubit concurrence, concurrence time series, and sudden-death /
 * revival detection.
 ******************************************************************************/
#pragma once

#include <optional>
#include <vector>

#include "qed2q/evolution.hpp"

namespace qed2q {

/// Concurrence of a two-qubit state.  Eigenvalues of rho rho~ are computed
/// with a general complex solver; tiny negative values (> -1e-12) are
/// clamped.  If a spurious imaginary eigenvalue part above 1e-10 appears,
/// the computation falls back to the Hermitian square-root construction.
/// Invalid inputs (non-Hermitian, wrong trace, negative) throw
/// std::domain_error.
double concurrence(const DensityMatrix4& rho);

struct ConcurrenceSeries {
    std::vector<double> t;
    std::vector<double> value;
    std::optional<double> death_time;    ///< first sustained crossing below threshold
    bool revival_detected = false;
    std::optional<double> revival_time;  ///< first sample above threshold after death
};

/// Threshold below which concurrence counts as zero, and the number of
/// consecutive samples required to call it a death.
inline constexpr double kConcurrenceFloor = 1e-9;
inline constexpr int kDeathWindow = 5;

ConcurrenceSeries concurrence_series(const Trajectory& traj);

/// (Re)derives death_time / revival fields from the t/value arrays.
void annotate_series(ConcurrenceSeries& series);

enum class DecayClass {
    smooth_decay,             ///< no sustained zero crossing
    sudden_death,             ///< dies at finite time, stays dead
    sudden_death_with_revival ///< dies, then returns above threshold
};

struct SuddenDeathReport {
    DecayClass classification = DecayClass::smooth_decay;
    std::optional<double> death_time;
    std::optional<double> revival_time;
};

SuddenDeathReport detect_sudden_death(const ConcurrenceSeries& series);

}  // namespace qed2q
