// Serial vs OpenMP timings for the grid-parallel kernels, plus an equality
// check that both paths produce identical bytes.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "qps/cocycle.hpp"
#include "qps/parallel.hpp"
#include "qps/tree.hpp"

using namespace qps;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
           1000.0;
}

template <typename Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return ms_since(t0);
}

}  // namespace

int main() {
    std::printf("qps_bench: %d worker(s) available\n\n", par::max_workers());

    const auto pot = TrigPotential::almost_mathieu(1.0);
    const auto alpha = FrequencyVector::golden();
    const auto theta0 = TorusPoint::zero(1);
    const auto grid = energy_grid(-3.0, 3.0, 0.02);

    SpectralGrid serial_grid, omp_grid;
    SweepOptions so;
    so.n_steps = 20000;
    so.exec = par::Exec::serial;
    const double t_sweep_serial = timed(
        [&] { serial_grid = sweep_cocycle(pot, alpha, theta0, grid, so); });
    so.exec = par::Exec::openmp;
    const double t_sweep_omp =
        timed([&] { omp_grid = sweep_cocycle(pot, alpha, theta0, grid, so); });
    const bool sweep_match =
        std::memcmp(serial_grid.gamma.data(), omp_grid.gamma.data(),
                    serial_grid.gamma.size() * sizeof(double)) == 0;

    TreeConfig tc;
    tc.depth = 2000;
    tc.lambda = 0.3;
    tc.pot = pot;
    tc.pool_size = 4000;
    const ComplexEnergy z{0.5, 1e-2};
    GreenSampleBatch serial_batch, omp_batch;
    tc.exec = par::Exec::serial;
    const double t_tree_serial =
        timed([&] { serial_batch = tree_green(z, tc, 1000, 7); });
    tc.exec = par::Exec::openmp;
    const double t_tree_omp = timed([&] { omp_batch = tree_green(z, tc, 1000, 7); });
    const bool tree_match =
        std::memcmp(serial_batch.samples.data(), omp_batch.samples.data(),
                    serial_batch.samples.size() * sizeof(Complex)) == 0;

    std::printf("%-24s %10s %10s %8s %6s\n", "kernel", "serial/ms", "openmp/ms",
                "speedup", "equal");
    std::printf("%-24s %10.1f %10.1f %7.2fx %6s\n", "cocycle energy sweep",
                t_sweep_serial, t_sweep_omp, t_sweep_serial / t_sweep_omp,
                sweep_match ? "yes" : "NO");
    std::printf("%-24s %10.1f %10.1f %7.2fx %6s\n", "tree pool batch",
                t_tree_serial, t_tree_omp, t_tree_serial / t_tree_omp,
                tree_match ? "yes" : "NO");
    return sweep_match && tree_match ? 0 : 1;
}
