/******************************************************************************
 * evolution.hpp
 *
 * Two-qubit density matrices, the collective (Bell) basis, and application of
 * the resummed propagator on a time grid.
 *
 * Basis conventions
 *   computational order: |00>, |01>, |10>, |11>   (|q1 q2>, q1 is the left bit)
 *   collective order:    |O>, |->, |+>, |I>
 *     |O> = |00>,  |+-> = (|01> +- |10>)/sqrt(2),  |I> = |11>
 ******************************************************************************/
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qed2q/kernel.hpp"

namespace qed2q {

enum class Basis { computational, collective };

enum class Model {
    nonmarkov,        ///< resummed propagator
    master_equation,  ///< time-local master equation integration
    markov,           ///< semigroup (constant-rate) reference
    oracle            ///< discretized-field reconstruction
};

struct DensityMatrix4 {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    Basis basis = Basis::computational;

    double trace_error() const;        ///< |tr(m) - 1|
    double hermiticity_error() const;  ///< max |m - m^dagger|
    double min_eigenvalue() const;     ///< smallest eigenvalue of (m+m^dagger)/2
    /// Throws std::domain_error when trace/hermiticity/positivity break the
    /// given tolerances.
    void require_valid(double tol_trace = 1e-9, double tol_herm = 1e-9,
                       double tol_eig = 1e-7) const;
};

/// Unitary whose columns are the collective states in computational
/// coordinates; rho_collective = B^dagger rho_comp B.
const Eigen::Matrix4cd& collective_transform();

DensityMatrix4 to_collective_basis(const DensityMatrix4& rho);
DensityMatrix4 to_computational_basis(const DensityMatrix4& rho);

/// Element-wise linear propagator map in the collective basis.  Linear in the
/// input (works on non-Hermitian matrices, e.g. matrix units).
Eigen::Matrix4cd propagate_collective_matrix(const Eigen::Matrix4cd& rho0,
                                             const PropagatorKernel& kernel,
                                             const Rates& rt);

/// Propagates a density matrix from t = 0 to kernel.t, returning the result
/// in the basis of the input.  The kernel must have been evaluated at the
/// same rates; t mismatches throw std::invalid_argument.
DensityMatrix4 propagate(const DensityMatrix4& rho0,
                         const PropagatorKernel& kernel, const Rates& rt,
                         double t);

struct TrajectorySample {
    double t = 0.0;
    DensityMatrix4 rho;
};

struct Trajectory {
    Model model = Model::nonmarkov;
    SystemParams params;
    std::vector<TrajectorySample> samples;
    bool positivity_violation = false;  ///< any eigenvalue < -1e-9
    double worst_eigenvalue = 0.0;      ///< most negative eigenvalue seen
    double worst_trace_error = 0.0;
};

/// Applies the propagator at every grid time (grid must start at 0 and be
/// strictly increasing).  Sample times are independent, so the loop is
/// OpenMP-parallel unless `parallel` is false.
Trajectory propagate_grid(const DensityMatrix4& rho0, const SystemParams& p,
                          std::span<const double> tgrid,
                          KappaSource source = KappaSource::closed_form,
                          bool parallel = true);

/// n equally spaced samples on [0, t_max] (first point exactly 0).
std::vector<double> uniform_grid(double t_max, int n);

void check_grid(std::span<const double> tgrid);

}  // namespace qed2q
