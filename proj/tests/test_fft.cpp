#include <doctest.h>

#include <cmath>

#include "qps/bloch.hpp"
#include "qps/fft.hpp"
#include "qps/rng.hpp"

using namespace qps;

TEST_CASE("fft round trip and mode indexing") {
    rng::Stream s(12, rng::Ctx::test, 0);
    std::vector<Complex> a(64);
    for (auto& x : a) x = Complex{s.uniform_pm1(), s.uniform_pm1()};
    auto b = a;
    fft(b, false);
    fft(b, true);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);

    // a pure mode lands in its slot
    std::vector<Complex> mode(32);
    for (std::size_t j = 0; j < 32; ++j)
        mode[j] = std::exp(Complex{0.0, 3.0 * two_pi * double(j) / 32.0});
    fft(mode, false);
    for (std::size_t j = 0; j < 32; ++j) {
        if (fft_mode(j, 32) == 3)
            CHECK(std::abs(mode[j] - Complex{32.0, 0.0}) < 1e-12);
        else
            CHECK(std::abs(mode[j]) < 1e-12);
    }
}

TEST_CASE("gauge alignment removes a synthetic coboundary") {
    // kappa(theta) = k0 + pi + P(theta) - P(S theta) with analytic P: the raw
    // dispersion is order one, the aligned remainder is resolution-limited
    const auto alpha = FrequencyVector::golden();
    const double a = alpha.alpha[0];
    const double k0 = -1.1;
    auto p = [](double th) {
        return 0.6 * std::sin(th) + 0.25 * std::cos(2.0 * th) + 0.1 * std::sin(5.0 * th);
    };
    CovariantField field;
    field.grid = ThetaGrid::uniform(256);
    const std::size_t n = 256;
    field.gamma.assign(n, Complex{0.0, 1.0});  // placeholder, kappa drives the test
    field.phi_m1.assign(n, 1.0);
    field.phi_0.assign(n, Complex{0.0, 1.0});
    field.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = field.grid.theta(int(i));
        field.kappa[i] = wrap_pi(k0 + M_PI + p(th) - p(th + two_pi * a));
    }
    const auto gauge = align_gauge(field, alpha);
    CHECK(gauge.dispersion_raw > 0.3);
    // the circular-std estimator bottoms out near sqrt(eps); 1e-6 is seven
    // orders below the raw dispersion
    CHECK(gauge.dispersion < 1e-6);
    CHECK(std::fabs(gauge.k - k0) < 1e-10);
}

TEST_CASE("alignment is the identity on constant phases") {
    CovariantField field;
    field.grid = ThetaGrid::uniform(64);
    field.gamma.assign(64, Complex{0.0, 1.0});
    field.phi_m1.assign(64, 1.0);
    field.phi_0.assign(64, Complex{0.0, 1.0});
    field.kappa.assign(64, M_PI / 2);
    const auto gauge = align_gauge(field, FrequencyVector::golden());
    CHECK(gauge.k == doctest::Approx(-M_PI / 2));
    CHECK(gauge.dispersion < 1e-14);
    for (const auto& g : gauge.phase) CHECK(std::abs(g - Complex{1.0, 0.0}) < 1e-12);
}
