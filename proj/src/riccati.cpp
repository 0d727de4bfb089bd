#include "qps/riccati.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qps/errors.hpp"

namespace qps {

ThetaGrid ThetaGrid::uniform(int n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw Error("ThetaGrid size must be a power of two >= 2");
    return ThetaGrid{n};
}

std::vector<double> ThetaGrid::thetas() const {
    std::vector<double> out(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) out[std::size_t(i)] = theta(i);
    return out;
}

namespace {

struct Cell {
    int i0;
    double w;  // fractional offset in [0,1)
};

Cell locate(std::size_t n, double theta) {
    const double x = wrap_2pi(theta) * double(n) / two_pi;
    int i0 = int(std::floor(x));
    if (i0 >= int(n)) i0 = 0;
    return {i0, x - std::floor(x)};
}

}  // namespace

std::complex<double> interp_linear(std::span<const std::complex<double>> f,
                                   double theta) {
    const auto c = locate(f.size(), theta);
    const std::size_t i1 = (std::size_t(c.i0) + 1) % f.size();
    return f[std::size_t(c.i0)] * (1.0 - c.w) + f[i1] * c.w;
}

double interp_linear(std::span<const double> f, double theta) {
    const auto c = locate(f.size(), theta);
    const std::size_t i1 = (std::size_t(c.i0) + 1) % f.size();
    return f[std::size_t(c.i0)] * (1.0 - c.w) + f[i1] * c.w;
}

Complex mobius_step_u(const ComplexEnergy& z, double u_at_theta, Complex gamma) {
    if (gamma == Complex{0.0, 0.0})
        throw PoleError("mobius_step: gamma = 0 is the pole of the map");
    return Complex{u_at_theta - z.e, z.eta} - 1.0 / gamma;
}

Complex mobius_step(const ComplexEnergy& z, const TrigPotential& pot,
                    const TorusPoint& theta, Complex gamma) {
    return mobius_step_u(z, pot.eval(theta), gamma);
}

Complex riccati_backward(const ComplexEnergy& z,
                         const std::function<double(std::int64_t)>& v,
                         std::int64_t depth, Complex seed) {
    const Complex zc = z.value();
    Complex g = seed;
    for (std::int64_t n = depth - 1; n >= 0; --n) g = 1.0 / (v(n) - zc - g);
    return g;
}

std::int64_t default_green_depth(double eta) {
    const double d = std::ceil(20.0 / eta);
    return std::max<std::int64_t>(10000, std::int64_t(d));
}

namespace {

Complex green_at_depth(const ComplexEnergy& z, const TrigPotential& pot,
                       const FrequencyVector& alpha, const TorusPoint& theta,
                       std::int64_t depth) {
    const Complex zc = z.value();
    Complex g{0.0, 1.0};
    if (pot.nu == 1) {
        const double th0 = theta[0];
        const double a = alpha.alpha[0];
        const bool zero = pot.is_zero();
        for (std::int64_t n = depth - 1; n >= 0; --n) {
            const double u =
                zero ? 0.0 : pot.eval1(wrap_2pi(th0 + two_pi * frac_mul(n, a)));
            g = 1.0 / (u - zc - g);
        }
        return g;
    }
    for (std::int64_t n = depth - 1; n >= 0; --n)
        g = 1.0 / (pot.eval(shift_n(theta, alpha, n)) - zc - g);
    return g;
}

}  // namespace

Complex halfline_green(const ComplexEnergy& z, const TrigPotential& pot,
                       const FrequencyVector& alpha, const TorusPoint& theta,
                       const GreenOptions& opts) {
    if (z.eta <= 0.0)
        throw Error("halfline_green needs eta > 0; drive eta = 0 limits through "
                    "an eta schedule");
    const std::int64_t depth = opts.depth > 0 ? opts.depth : default_green_depth(z.eta);
    if (depth < 1) throw Error("halfline_green: depth must be >= 1");
    const Complex g = green_at_depth(z, pot, alpha, theta, depth);
    if (opts.check_stability) {
        const Complex g2 = green_at_depth(z, pot, alpha, theta, 2 * depth);
        if (std::abs(g - g2) > opts.stability_tol) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "halfline_green: depth %lld unstable at eta = %g "
                          "(doubling moved the value by %.3e)",
                          static_cast<long long>(depth), z.eta, std::abs(g - g2));
            throw ConvergenceError(buf, g, g2);
        }
    }
    return g;
}

CovariantField make_green_field(const ComplexEnergy& z, const TrigPotential& pot,
                                const FrequencyVector& alpha, int grid_size,
                                const GreenOptions& opts, par::Exec exec,
                                int workers) {
    if (pot.nu != 1 || alpha.dim() != 1)
        throw Error("make_green_field supports nu = 1 only");
    CovariantField field;
    field.grid = ThetaGrid::uniform(grid_size);
    field.gamma.resize(std::size_t(grid_size));
    par::for_index(grid_size, exec, workers, [&](std::int64_t i) {
        const TorusPoint th({field.grid.theta(int(i))});
        field.gamma[std::size_t(i)] = halfline_green(z, pot, alpha, th, opts);
    });
    return field;
}

double cocycle_residual(const CovariantField& field, const ComplexEnergy& z,
                        const TrigPotential& pot, const FrequencyVector& alpha) {
    const int n = field.grid.size;
    if (n < 16)
        throw Error("cocycle_residual: grid too coarse for interpolation; "
                    "use at least 16 points");
    const Complex zc = z.value();
    const double shift_angle = two_pi * alpha.alpha[0];
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = field.grid.theta(i);
        const Complex g_shift = interp_linear(field.gamma, th + shift_angle);
        const Complex rhs = 1.0 / (pot.eval1(th) - zc - g_shift);
        worst = std::max(worst, std::abs(field.gamma[std::size_t(i)] - rhs));
    }
    return worst;
}

double uniqueness_probe(const ComplexEnergy& z, const TrigPotential& pot,
                        const FrequencyVector& alpha, const TorusPoint& theta,
                        std::span<const Complex> seeds, std::int64_t depth) {
    if (seeds.size() < 2) throw Error("uniqueness_probe needs >= 2 seeds");
    for (const auto& s : seeds)
        if (s.imag() <= 0.0)
            throw Error("uniqueness_probe: all seeds must have Im > 0");
    if (depth < 0) throw Error("uniqueness_probe: depth must be >= 0");

    std::vector<Complex> ends(seeds.begin(), seeds.end());
    if (depth > 0) {
        const auto orbit = orbit_sample(pot, theta, alpha, depth);
        const Complex zc = z.value();
        for (auto& g : ends)
            for (std::int64_t nIdx = depth - 1; nIdx >= 0; --nIdx)
                g = 1.0 / (orbit[std::size_t(nIdx)] - zc - g);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i + 1; j < ends.size(); ++j)
            worst = std::max(worst, std::abs(ends[i] - ends[j]));
    return worst;
}

void covariant_state(CovariantField& field, const FrequencyVector& alpha) {
    const int n = field.grid.size;
    field.phi_m1.resize(std::size_t(n));
    field.phi_0.resize(std::size_t(n));
    field.kappa.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double im = field.gamma[std::size_t(i)].imag();
        if (im <= 0.0) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "covariant_state: Im Gamma <= 0 at theta = %.12g",
                          field.grid.theta(i));
            throw Error(buf);
        }
        field.phi_m1[std::size_t(i)] = 1.0 / std::sqrt(im);
        field.phi_0[std::size_t(i)] =
            field.phi_m1[std::size_t(i)] * field.gamma[std::size_t(i)];
    }
    // kappa from the n = -1 covariance relation phi_0(theta) = e^{i kappa} phi_{-1}(S theta)
    const double shift_angle = two_pi * alpha.alpha[0];
    for (int i = 0; i < n; ++i) {
        const double th = field.grid.theta(i);
        const double denom = interp_linear(field.phi_m1, th + shift_angle);
        const Complex ratio = field.phi_0[std::size_t(i)] / denom;
        double k = std::atan2(ratio.imag(), ratio.real());
        if (k <= -M_PI) k = M_PI;
        field.kappa[std::size_t(i)] = k;
    }
}

std::string covariant_field_csv(const CovariantField& field) {
    std::string out = "theta,re_gamma,im_gamma,phi_m1,re_phi_0,im_phi_0,kappa\n";
    char buf[256];
    for (int i = 0; i < field.grid.size; ++i) {
        const std::size_t s = std::size_t(i);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      field.grid.theta(i), field.gamma[s].real(), field.gamma[s].imag(),
                      field.has_state() ? field.phi_m1[s] : 0.0,
                      field.has_state() ? field.phi_0[s].real() : 0.0,
                      field.has_state() ? field.phi_0[s].imag() : 0.0,
                      field.has_state() ? field.kappa[s] : 0.0);
        out += buf;
    }
    return out;
}

}  // namespace qps
