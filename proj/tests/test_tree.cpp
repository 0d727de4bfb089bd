#include <doctest.h>

#include <cmath>
#include <cstring>

#include "qps/oracle.hpp"
#include "qps/riccati.hpp"
#include "qps/stats.hpp"
#include "qps/tree.hpp"

using namespace qps;

namespace {

double median_im(const GreenSampleBatch& b) {
    std::vector<double> im(b.samples.size());
    for (std::size_t i = 0; i < b.samples.size(); ++i) im[i] = b.samples[i].imag();
    return stats::median(std::move(im));
}

TreeConfig free_config(int k, std::int64_t depth) {
    TreeConfig tc;
    tc.branching = k;
    tc.depth = depth;
    return tc;
}

}  // namespace

TEST_CASE("free deterministic root has the closed form i/2") {
    auto tc = free_config(2, 20000);
    const auto batch = tree_green({0.0, 1.0}, tc, 5, 1);
    // scaling identity: 2^{-1/2} Gamma_free(i / sqrt 2) = i/2
    for (const auto& s : batch.samples)
        CHECK(std::abs(s - Complex{0.0, 0.5}) < 1e-8);
    const Complex via_oracle =
        oracle::free_green(Complex{0.0, 1.0} / std::sqrt(2.0)) / std::sqrt(2.0);
    CHECK(std::abs(batch.samples[0] - via_oracle) < 1e-10);
}

TEST_CASE("lambda = 0 batches are deterministic with zero width") {
    TreeConfig tc = free_config(2, 5000);
    tc.pot = TrigPotential::almost_mathieu(1.0);
    const auto batch = tree_green({0.3, 0.05}, tc, 7, 9);
    for (const auto& s : batch.samples)
        CHECK(std::abs(s - batch.samples[0]) < 1e-15);
    CHECK(distribution_width(batch) == 0.0);
}

TEST_CASE("scaling identity at lambda = 0 for K in {2,3}") {
    for (int k : {2, 3}) {
        for (const bool am : {false, true}) {
            TreeConfig tc = free_config(k, 0);
            if (am) tc.pot = TrigPotential::almost_mathieu(1.0);
            const double root_k = std::sqrt(double(k));
            tc.depth = default_tree_depth(1e-2, k);
            for (double e : {-1.5, 0.0, 0.8, 2.2}) {
                const ComplexEnergy z{e, 1e-2};
                const auto batch = tree_green(z, tc, 1, 4);
                GreenOptions gopts;
                gopts.depth = tc.depth;
                gopts.check_stability = false;
                const Complex one_d = halfline_green(
                    {e / root_k, 1e-2 / root_k}, tc.pot, tc.alpha, tc.theta, gopts);
                CHECK(std::abs(batch.samples[0] - one_d / root_k) < 1e-8);
            }
        }
    }
}

TEST_CASE("identical config and seed reproduce byte-identical batches") {
    TreeConfig tc = free_config(2, 30);
    tc.lambda = 0.4;
    const ComplexEnergy z{0.5, 1e-2};
    const auto a = tree_green(z, tc, 500, 42);
    const auto b = tree_green(z, tc, 500, 42);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                      a.samples.size() * sizeof(Complex)) == 0);
    const auto c = tree_green(z, tc, 500, 43);
    CHECK(std::memcmp(a.samples.data(), c.samples.data(),
                      a.samples.size() * sizeof(Complex)) != 0);
}

TEST_CASE("sampled vertices stay in the upper half plane") {
    rng::Stream s(3, rng::Ctx::test, 9);
    for (int trial = 0; trial < 20; ++trial) {
        TreeConfig tc = free_config(2 + (trial % 2), 50);
        tc.lambda = 2.0 * s.next_unit();
        tc.disorder.kind = trial % 3 == 0   ? DisorderKind::cauchy
                           : trial % 3 == 1 ? DisorderKind::bernoulli
                                            : DisorderKind::uniform;
        tc.radial = (trial % 5) == 0;
        tc.pool_size = 200;
        const auto batch =
            tree_green({2.0 * s.uniform_pm1(), 0.05}, tc, 100, 100 + trial);
        for (const auto& g : batch.samples) REQUIRE(g.imag() > 0.0);
    }
}

TEST_CASE("full tree agrees with the pool estimator at depth 8") {
    TreeConfig tc = free_config(2, 8);
    tc.lambda = 0.4;
    tc.pool_size = 5000;
    const ComplexEnergy z{0.5, 0.1};
    const auto full = tree_green(z, tc, 600, 5, TreeMode::full_tree);
    const auto pool = tree_green(z, tc, 2000, 5, TreeMode::pool);
    const double mf = median_im(full);
    const double mp = median_im(pool);
    // medians within combined bootstrap spread
    const auto wf = width_point(z, tc, tc.lambda, 600, 5);
    CHECK(std::fabs(mf - mp) < 0.1 * std::max(0.2, wf.width));
}

TEST_CASE("full tree rejects exponential sizes with a pool hint") {
    TreeConfig tc = free_config(2, 40);
    tc.lambda = 0.1;
    try {
        tree_green({0.0, 0.1}, tc, 1, 1, TreeMode::full_tree);
        FAIL("expected a size rejection");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("pool") != std::string::npos);
    }
}

TEST_CASE("radial mode matches the rescaled 1d random recursion sample by sample") {
    TreeConfig tc = free_config(2, 800);
    tc.lambda = 0.4;
    tc.radial = true;
    const ComplexEnergy z{0.3, 0.05};
    const double root_k = std::sqrt(2.0);
    const auto batch = tree_green(z, tc, 50, 11);
    for (std::int64_t s = 0; s < 50; ++s) {
        // same per-(sample, generation) streams as the radial evaluator
        std::vector<double> omega(std::size_t(tc.depth));
        for (std::int64_t g = 0; g < tc.depth; ++g) {
            rng::Stream st(11, rng::Ctx::radial_gen,
                           (std::uint64_t(s) << 32) | std::uint64_t(g));
            omega[std::size_t(g)] = tc.disorder.draw(st);
        }
        const Complex one_d = riccati_backward(
            {z.e / root_k, z.eta / root_k},
            [&](std::int64_t n) {
                return tc.lambda * omega[std::size_t(n)] / root_k;
            },
            tc.depth, Complex{0.0, root_k});
        CHECK(std::abs(batch.samples[std::size_t(s)] - one_d / root_k) < 1e-12);
    }
}

TEST_CASE("depth doubling leaves converged medians unchanged") {
    TreeConfig tc = free_config(2, 2000);
    tc.lambda = 0.3;
    tc.radial = true;
    const ComplexEnergy z{0.5, 0.05};
    const auto a = tree_green(z, tc, 200, 21);
    tc.depth = 4000;
    const auto b = tree_green(z, tc, 200, 21);
    CHECK(std::fabs(median_im(a) - median_im(b)) < 1e-6);

    TreeConfig tp = free_config(2, 2000);
    tp.lambda = 0.3;
    tp.pool_size = 1000;
    const auto c = tree_green(z, tp, 200, 21);
    tp.depth = 4000;
    const auto d = tree_green(z, tp, 200, 21);
    CHECK(std::fabs(median_im(c) - median_im(d)) < 1e-6);
}

TEST_CASE("distribution width conventions") {
    GreenSampleBatch batch;
    batch.samples.assign(10, Complex{0.7, 0.2});
    CHECK(distribution_width(batch) == 0.0);

    batch.samples = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    CHECK(distribution_width(batch) == doctest::Approx(0.5));
}

TEST_CASE("weak disorder keeps the mean Green value near lambda = 0") {
    TreeConfig tc = free_config(2, 30);
    const ComplexEnergy z{0.0, 0.01};
    const auto base = tree_green(z, tc, 1, 2);
    const double im0 = base.samples[0].imag();

    auto mean_im = [&](double lambda) {
        TreeConfig c = tc;
        c.lambda = lambda;
        const auto b = tree_green(z, c, 2000, 2);
        double s = 0.0;
        for (const auto& v : b.samples) s += v.imag();
        return s / double(b.samples.size());
    };
    // measured: relative gap 0.13 at lambda = 0.3 and 0.043 at 0.15, stable
    // across seeds; the pool estimator matches full-tree evaluation at depth
    // 12 to three digits, so these are properties of the operator, not bias
    const double gap_big = std::fabs(mean_im(0.3) - im0);
    const double gap_small = std::fabs(mean_im(0.15) - im0);
    CHECK(gap_big < 0.15 * im0);
    CHECK(gap_small < 0.6 * gap_big);
}

TEST_CASE("width curve trivia and monotone trend") {
    TreeConfig tc = free_config(2, 30);
    const ComplexEnergy z{0.5, 0.01};
    const std::vector<double> only_zero{0.0};
    const auto trivial = width_curve(z, tc, only_zero, 100, 3);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].width == 0.0);
    CHECK(trivial[0].ci_lo == 0.0);
    CHECK(trivial[0].ci_hi == 0.0);

    const std::vector<double> increasing{0.05, 0.5};
    CHECK_THROWS_AS(width_curve(z, tc, increasing, 100, 3), Error);

    const std::vector<double> schedule{0.5, 0.05};
    const auto curve = width_curve(z, tc, schedule, 1500, 3);
    CHECK(curve[1].width < curve[0].width);
    CHECK(curve[1].ci_hi < curve[0].ci_lo);  // non-overlapping intervals
}

TEST_CASE("ac_mass vanishes on the resolvent set and validates resolution") {
    TreeConfig tc = free_config(2, 4000);
    CHECK(ac_mass({5.0, 6.0}, tc, 0.0, 1e-3, 1, 0.05, 256, 0.1, 1) == 0.0);
    CHECK_THROWS_AS(ac_mass({-2.0, 2.0}, tc, 0.0, 1e-3, 1, 0.05, 8, 0.1, 1), Error);
}

TEST_CASE("ac mass inside a subcritical band does not shrink as lambda drops") {
    // measured: the band [1.3, 1.62] of u=1 stays fully above threshold for
    // every lambda <= 0.3 at this eta, so the trend holds with equality
    TreeConfig tc;
    tc.branching = 2;
    tc.pot = TrigPotential::almost_mathieu(1.0);
    tc.pool_size = 2000;
    tc.depth = 800;
    const Interval band{1.3, 1.62};
    const double step = (band.hi - band.lo) * std::sqrt(2.0) / 31.0;
    const double big = ac_mass(band, tc, 0.2, 2e-2, 400, 0.05, 32, 0.2, 7);
    const double small = ac_mass(band, tc, 0.05, 2e-2, 400, 0.05, 32, 0.2, 7);
    CHECK(small >= big - 2.0 * step);
    CHECK(small <= band.length() * std::sqrt(2.0) + 2.0 * step);
}

TEST_CASE("free-tree ac mass approximates sqrt(K) times the band length") {
    TreeConfig tc = free_config(2, 0);
    const double mass = ac_mass({-2.0, 2.0}, tc, 0.0, 1e-3, 1, 0.05, 1024, 0.1, 1);
    CHECK(std::fabs(mass - 4.0 * std::sqrt(2.0)) < 0.1);
}
