#include <doctest.h>

#include <cstring>
#include <numeric>

#include "qps/cocycle.hpp"
#include "qps/parallel.hpp"
#include "qps/riccati.hpp"
#include "qps/tree.hpp"

using namespace qps;

TEST_CASE("for_index covers every slot once in both modes") {
    std::vector<int> hits(1000, 0);
    par::for_index(1000, par::Exec::openmp, 0, [&](std::int64_t i) {
        hits[std::size_t(i)] += 1;
    });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    par::for_index(1000, par::Exec::serial, 0, [&](std::int64_t i) {
        hits[std::size_t(i)] += 1;
    });
    for (int h : hits) CHECK(h == 2);
}

TEST_CASE("cocycle sweep: serial reference equals the openmp kernel") {
    const auto am = TrigPotential::almost_mathieu(1.0);
    const auto alpha = FrequencyVector::golden();
    const auto grid = energy_grid(-3.0, 3.0, 0.1);
    SweepOptions serial, omp;
    serial.n_steps = omp.n_steps = 5000;
    serial.exec = par::Exec::serial;
    omp.exec = par::Exec::openmp;
    const auto a = sweep_cocycle(am, alpha, TorusPoint({0.0}), grid, serial);
    const auto b = sweep_cocycle(am, alpha, TorusPoint({0.0}), grid, omp);
    CHECK(std::memcmp(a.gamma.data(), b.gamma.data(),
                      a.gamma.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.ids_val.data(), b.ids_val.data(),
                      a.ids_val.size() * sizeof(double)) == 0);
}

TEST_CASE("green field: serial reference equals the openmp kernel") {
    const auto am = TrigPotential::almost_mathieu(1.0);
    const auto alpha = FrequencyVector::golden();
    const ComplexEnergy z{0.2, 1e-2};
    const auto a = make_green_field(z, am, alpha, 64, {}, par::Exec::serial);
    const auto b = make_green_field(z, am, alpha, 64, {}, par::Exec::openmp);
    CHECK(std::memcmp(a.gamma.data(), b.gamma.data(),
                      a.gamma.size() * sizeof(Complex)) == 0);
}

TEST_CASE("tree batches: serial reference equals the openmp kernel") {
    TreeConfig tc;
    tc.depth = 200;
    tc.lambda = 0.4;
    tc.pool_size = 500;
    const ComplexEnergy z{0.5, 0.05};
    tc.exec = par::Exec::serial;
    const auto a = tree_green(z, tc, 300, 7);
    tc.exec = par::Exec::openmp;
    const auto b = tree_green(z, tc, 300, 7);
    CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                      a.samples.size() * sizeof(Complex)) == 0);

    tc.radial = true;
    tc.exec = par::Exec::serial;
    const auto c = tree_green(z, tc, 300, 7);
    tc.exec = par::Exec::openmp;
    const auto d = tree_green(z, tc, 300, 7);
    CHECK(std::memcmp(c.samples.data(), d.samples.data(),
                      c.samples.size() * sizeof(Complex)) == 0);
}
