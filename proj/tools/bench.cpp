// Benchmark of the two-excitation-sector matvec: serial reference kernel
// against the OpenMP-parallel one, over a range of mode counts.
//
//   bench [n_modes ...]     (default: 300 600 1200 2000)
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qed2q/field_oracle.hpp"

using namespace qed2q;
using clock_type = std::chrono::steady_clock;

namespace {

double time_matvec(const PairSectorOperator& op, bool parallel, int reps,
                   const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    // warm-up
    if (parallel)
        op.apply_parallel(x, y);
    else
        op.apply_serial(x, y);
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) {
        if (parallel)
            op.apply_parallel(x, y);
        else
            op.apply_serial(x, y);
    }
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes;
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
    if (sizes.empty()) sizes = {300, 600, 1200, 2000};

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; 'parallel' runs the serial kernel\n");
#endif
    std::printf("%8s %12s %10s %14s %14s %9s %12s\n", "n_modes", "dim",
                "pairs", "serial ms/mv", "openmp ms/mv", "speedup",
                "max |diff|");

    const SystemParams p{0.05, 1.0, 1.0};
    std::mt19937 rng(17);
    std::normal_distribution<double> nd;
    for (int n : sizes) {
        const ModeGrid grid = build_mode_grid(p, n);
        const PairSectorOperator op(grid);
        Eigen::VectorXcd x(op.dim()), ys(op.dim()), yp(op.dim());
        for (Eigen::Index i = 0; i < op.dim(); ++i)
            x[i] = cplx(nd(rng), nd(rng));
        x /= x.norm();

        const int reps = std::max(3, static_cast<int>(2e9 / (16.0 * op.dim() *
                                                             op.dim() + 1) +
                                                      3));
        const int r = std::min(reps, 200);
        const double ms_s = time_matvec(op, false, r, x, ys);
        const double ms_p = time_matvec(op, true, r, x, yp);
        op.apply_serial(x, ys);
        op.apply_parallel(x, yp);
        std::printf("%8d %12lld %10d %14.3f %14.3f %8.2fx %12.3e\n", n,
                    static_cast<long long>(op.dim()), op.n_pairs(), ms_s,
                    ms_p, ms_s / ms_p, (ys - yp).cwiseAbs().maxCoeff());
    }
    return 0;
}
