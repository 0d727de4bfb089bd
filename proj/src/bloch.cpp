#include "qps/bloch.hpp"

#include <cmath>
#include <cstdio>

#include "qps/cocycle.hpp"
#include "qps/fft.hpp"
#include "qps/stats.hpp"

namespace qps {

namespace {

// Field values at S theta for every grid point, by Fourier phase shift:
// exact for the trigonometric interpolant, so constants shift exactly.
std::vector<Complex> shifted_field(std::span<const Complex> f, double alpha_cycles) {
    std::vector<Complex> a(f.begin(), f.end());
    fft(a, false);
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        const int m = fft_mode(j, n);
        a[j] *= std::exp(Complex{0.0, two_pi * double(m) * alpha_cycles});
    }
    fft(a, true);
    return a;
}

}  // namespace

BFCandidate plane_wave_candidate(double k, int grid_size) {
    BFCandidate cand;
    cand.grid = ThetaGrid::uniform(grid_size);
    cand.k = k;
    cand.energy = 2.0 * std::cos(k);
    cand.psi0.assign(std::size_t(grid_size), Complex{1.0, 0.0});
    cand.psim1.assign(std::size_t(grid_size), std::exp(Complex{0.0, -k}));
    return cand;
}

AlignedGauge align_gauge(const CovariantField& field, const FrequencyVector& alpha,
                         int m_align, double denom_floor) {
    if (!field.has_state())
        throw Error("align_gauge: field carries no kappa; run covariant_state");
    const std::size_t n = field.kappa.size();
    if (m_align <= 0) m_align = int(n) / 8;

    AlignedGauge out;
    out.dispersion_raw = stats::circular_stats(field.kappa).stddev;

    // multiplier phases w = e^{i(kappa - pi)}; k is their circular mean
    Complex mean{0.0, 0.0};
    std::vector<Complex> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(Complex{0.0, field.kappa[i] - M_PI});
        mean += w[i];
    }
    out.k = std::atan2(mean.imag(), mean.real());
    if (out.k <= -M_PI) out.k = M_PI;

    // represent the phases in the wrap-free window around the circular mean,
    // then move their linear mean into k: the m = 0 component of u is a
    // constant the coboundary cannot carry
    std::vector<Complex> u(n);
    const Complex unrotate = std::exp(Complex{0.0, -out.k});
    double u_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = Complex{std::arg(w[i] * unrotate), 0.0};
        u_mean += u[i].real();
    }
    u_mean /= double(n);
    out.k = wrap_pi(out.k + u_mean);
    for (std::size_t i = 0; i < n; ++i) u[i] -= u_mean;

    auto spectrum = u;
    fft(spectrum, false);
    std::vector<Complex> h_hat(n, Complex{0.0, 0.0});
    for (std::size_t j = 1; j < n; ++j) {
        const int m = fft_mode(j, n);
        if (std::abs(m) > m_align) continue;
        const Complex rot = std::exp(Complex{0.0, two_pi * double(m) * alpha.alpha[0]});
        const Complex denom = Complex{1.0, 0.0} - rot;
        if (std::abs(denom) < denom_floor) continue;  // near-resonant mode stays
        h_hat[j] = -spectrum[j] / denom;
    }
    auto h = h_hat;
    fft(h, true);
    auto h_shift = h_hat;
    for (std::size_t j = 0; j < n; ++j) {
        const int m = fft_mode(j, n);
        h_shift[j] *= std::exp(Complex{0.0, two_pi * double(m) * alpha.alpha[0]});
    }
    fft(h_shift, true);

    std::vector<double> remainder(n);
    out.phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        remainder[i] = out.k + u[i].real() + h[i].real() - h_shift[i].real();
        out.phase[i] = std::exp(Complex{0.0, h[i].real()});
    }
    out.dispersion = stats::circular_stats(remainder).stddev;
    return out;
}

BFCandidate candidate_from_field(const CovariantField& field, double energy,
                                 const FrequencyVector& alpha, bool align) {
    if (!field.has_state())
        throw Error("candidate_from_field: run covariant_state first");
    BFCandidate cand;
    cand.grid = field.grid;
    cand.energy = energy;
    const std::size_t n = field.gamma.size();
    cand.psi0.resize(n);
    cand.psim1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cand.psi0[i] = -field.phi_0[i];
        cand.psim1[i] = Complex{field.phi_m1[i], 0.0};
    }
    if (align) {
        const auto gauge = align_gauge(field, alpha);
        for (std::size_t i = 0; i < n; ++i) {
            cand.psi0[i] *= gauge.phase[i];
            cand.psim1[i] *= gauge.phase[i];
        }
        cand.k = gauge.k;
    } else {
        const auto circ = stats::circular_stats(field.kappa);
        cand.k = wrap_pi(circ.mean - M_PI);
    }
    return cand;
}

namespace {

int grid_index_of(const ThetaGrid& grid, const TorusPoint& theta) {
    const double x = wrap_2pi(theta[0]) * double(grid.size) / two_pi;
    const int i = int(std::lround(x)) % grid.size;
    if (std::fabs(x - std::lround(x)) > 1e-9 * double(grid.size))
        throw Error("theta does not lie on the candidate grid");
    return i;
}

}  // namespace

Complex wronskian(const BFCandidate& cand, int idx) {
    const std::size_t i = std::size_t(idx);
    return cand.psi0[i] * std::conj(cand.psim1[i]) -
           std::conj(cand.psi0[i]) * cand.psim1[i];
}

Complex wronskian(const BFCandidate& cand, const TorusPoint& theta) {
    return wronskian(cand, grid_index_of(cand.grid, theta));
}

WronskianStats wronskian_stats(const BFCandidate& cand) {
    const int n = cand.grid.size;
    Complex mean{0.0, 0.0};
    for (int i = 0; i < n; ++i) mean += wronskian(cand, i);
    mean /= double(n);
    double var = 0.0, max_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(wronskian(cand, i) - mean);
        var += d * d;
        max_dev = std::max(max_dev, d);
    }
    var /= double(n);
    WronskianStats out;
    out.mean = mean;
    out.max_dev = max_dev;
    const double m2 = std::norm(mean);
    out.rel_variance = m2 > 0.0 ? var / m2 : var;
    return out;
}

Complex riccati_ratio(const BFCandidate& cand, int idx) {
    const std::size_t i = std::size_t(idx);
    if (cand.psim1[i] == Complex{0.0, 0.0})
        throw PoleError("riccati_ratio: psi_{-1} vanishes on the grid");
    return -cand.psi0[i] / cand.psim1[i];
}

Complex riccati_ratio(const BFCandidate& cand, const TorusPoint& theta) {
    return riccati_ratio(cand, grid_index_of(cand.grid, theta));
}

double covariance_defect(const BFCandidate& cand, const FrequencyVector& alpha) {
    const Complex phase = std::exp(Complex{0.0, cand.k});
    const auto shifted = shifted_field(cand.psim1, alpha.alpha[0]);
    double worst = 0.0;
    for (int i = 0; i < cand.grid.size; ++i)
        worst = std::max(worst, std::abs(cand.psi0[std::size_t(i)] -
                                         phase * shifted[std::size_t(i)]));
    return worst;
}

namespace {

struct M2 {
    Complex a, b, c, d;  // [[a, b], [c, d]]

    M2 mul(const M2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                c * o.b + d * o.d};
    }
    Complex det() const { return a * d - b * c; }
    M2 inv() const {
        const Complex dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

}  // namespace

double reducibility_residual(const BFCandidate& cand, const TrigPotential& pot,
                             const FrequencyVector& alpha, double det_floor) {
    const int n = cand.grid.size;
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max({scale, std::abs(cand.psi0[std::size_t(i)]),
                          std::abs(cand.psim1[std::size_t(i)])});
    const double floor = det_floor * scale * scale;
    const Complex em = std::exp(Complex{0.0, -cand.k});
    const Complex ep = std::exp(Complex{0.0, cand.k});
    const auto psi0_s = shifted_field(cand.psi0, alpha.alpha[0]);
    const auto psim1_s = shifted_field(cand.psim1, alpha.alpha[0]);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = cand.grid.theta(i);
        const Complex p0 = cand.psi0[std::size_t(i)];
        const Complex p1 = cand.psim1[std::size_t(i)];
        const M2 z{std::conj(p0), p0, std::conj(p1), p1};
        const Complex q0 = psi0_s[std::size_t(i)];
        const Complex q1 = psim1_s[std::size_t(i)];
        const M2 zs{std::conj(q0), q0, std::conj(q1), q1};
        if (std::abs(z.det()) < floor || std::abs(zs.det()) < floor) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "reducibility_residual: near-singular Z at theta = %.12g",
                          th);
            throw ConditioningError(buf, th);
        }
        const double t = cand.energy - pot.eval1(th);
        const M2 a{Complex{t, 0.0}, Complex{-1.0, 0.0}, Complex{1.0, 0.0},
                   Complex{0.0, 0.0}};
        const M2 red = zs.inv().mul(a).mul(z);
        worst = std::max({worst, std::abs(red.a - em), std::abs(red.b),
                          std::abs(red.c), std::abs(red.d - ep)});
    }
    return worst;
}

Quasimomentum quasimomentum(const CovariantField& field) {
    if (!field.has_state())
        throw Error("quasimomentum: field carries no kappa; run covariant_state");
    const auto c = stats::circular_stats(field.kappa);
    return {c.mean, c.stddev, c.resultant};
}

namespace {

double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

// Enumerates m in the |m|_inf <= m_max box, reducing with fn(m . alpha).
template <typename Fn>
void enumerate_module(const FrequencyVector& alpha, int m_max, Fn&& fn) {
    const int nu = alpha.dim();
    std::vector<int> m(std::size_t(nu), -m_max);
    while (true) {
        double dot = 0.0;
        for (int j = 0; j < nu; ++j) dot += m[std::size_t(j)] * alpha.alpha[std::size_t(j)];
        fn(dot);
        int j = 0;
        while (j < nu && ++m[std::size_t(j)] > m_max) {
            m[std::size_t(j)] = -m_max;
            ++j;
        }
        if (j == nu) break;
    }
}

}  // namespace

double resonance_distance(double k, const FrequencyVector& alpha, int m_max) {
    if (m_max < 1) throw Error("resonance_distance: m_max must be >= 1");
    const double x = std::fabs(k) / M_PI;
    double best = 0.5;
    enumerate_module(alpha, m_max, [&](double dot) {
        best = std::min(best, stats::circle_dist_mod1(x, frac01(dot)));
    });
    return best;
}

bool ids_momentum_check(double k, double n, const FrequencyVector& alpha, int m_max,
                        double tol) {
    if (n < 0.0 || n > 1.0) throw Error("ids_momentum_check: n must be in [0,1]");
    const double x = std::fabs(k) / two_pi;
    bool ok = false;
    enumerate_module(alpha, m_max, [&](double dot) {
        if (stats::circle_dist_mod1(x, frac01(dot + 0.5 * n)) <= tol) ok = true;
        if (stats::circle_dist_mod1(x, frac01(dot - 0.5 * n)) <= tol) ok = true;
    });
    return ok;
}

BFReport bf_diagnostics(double energy, const TrigPotential& pot,
                        const FrequencyVector& alpha, const TorusPoint& theta0,
                        const BfOptions& opts) {
    ComplexEnergy z{energy, opts.eta};
    CovariantField field = make_green_field(z, pot, alpha, opts.grid_size, opts.green,
                                            opts.exec, opts.workers);
    covariant_state(field, alpha);
    const auto qm = quasimomentum(field);
    const auto gauge = align_gauge(field, alpha);
    const auto cand = candidate_from_field(field, energy, alpha, true);

    BFReport rep;
    rep.energy = energy;
    rep.k = qm.k;
    rep.dispersion = gauge.dispersion;
    const auto ws = wronskian_stats(cand);
    rep.wronskian_im = ws.mean.imag();
    rep.wronskian_rel_variance = ws.rel_variance;
    rep.reducibility_residual = reducibility_residual(cand, pot, alpha);
    rep.resonance_distance_at_m = resonance_distance(rep.k, alpha, opts.m_max);
    rep.ids_value = ids(energy, pot, alpha, theta0, opts.ids_steps);
    rep.check_passed =
        ids_momentum_check(rep.k, rep.ids_value, alpha, opts.m_max, opts.ids_tol);
    return rep;
}

}  // namespace qps
