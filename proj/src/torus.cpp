#include "qps/torus.hpp"

#include <cmath>
#include <string>

namespace qps {

double wrap_2pi(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    if (y >= two_pi) y = 0.0;
    return y;
}

double wrap_pi(double x) {
    double y = std::fmod(x + M_PI, two_pi);
    if (y <= 0.0) y += two_pi;
    return y - M_PI;
}

double frac_mul(std::int64_t n, double a) {
    const double hi = double(n) * a;
    const double lo = std::fma(double(n), a, -hi);  // exact product error
    double f = hi - std::floor(hi);
    f += lo;
    f -= std::floor(f);
    if (f >= 1.0) f = 0.0;
    return f;
}

TorusPoint::TorusPoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.empty()) throw Error("TorusPoint needs dimension >= 1");
    for (auto& x : coords) x = wrap_2pi(x);
}

TorusPoint TorusPoint::zero(int nu) {
    return TorusPoint(std::vector<double>(std::size_t(nu), 0.0));
}

FrequencyVector FrequencyVector::golden() {
    return FrequencyVector({(std::sqrt(5.0) - 1.0) / 2.0});
}

namespace {

bool scan_resonances(std::span<const double> alpha, std::vector<int>& m, std::size_t j,
                     int m_check, double tol, std::vector<int>& hit) {
    if (j == alpha.size()) {
        bool all_zero = true;
        double dot = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (m[i] != 0) all_zero = false;
            dot += m[i] * alpha[i];
        }
        if (all_zero) return false;
        if (std::fabs(dot - std::round(dot)) < tol) {
            hit = m;
            return true;
        }
        return false;
    }
    for (int v = -m_check; v <= m_check; ++v) {
        m[j] = v;
        if (scan_resonances(alpha, m, j + 1, m_check, tol, hit)) return true;
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> find_resonant_m(const FrequencyVector& alpha,
                                                int m_check, double tol) {
    const int nu = alpha.dim();
    if (nu == 1) {
        // m*a integer iff a rational with denominator <= m_check
        const double a = alpha.alpha[0];
        for (int m = 1; m <= m_check; ++m) {
            const double p = m * a;
            if (std::fabs(p - std::round(p)) < tol) return std::vector<int>{m};
        }
        return std::nullopt;
    }
    std::vector<int> m(std::size_t(nu), 0), hit;
    if (scan_resonances(alpha.alpha, m, 0, m_check, tol, hit)) return hit;
    return std::nullopt;
}

TorusPoint shift(const TorusPoint& theta, const FrequencyVector& alpha) {
    if (theta.dim() != alpha.dim()) throw Error("shift: dimension mismatch");
    TorusPoint out;
    out.coords.resize(theta.coords.size());
    for (std::size_t j = 0; j < theta.coords.size(); ++j)
        out.coords[j] = wrap_2pi(theta.coords[j] + two_pi * alpha.alpha[j]);
    return out;
}

TorusPoint shift_back(const TorusPoint& theta, const FrequencyVector& alpha) {
    TorusPoint out;
    out.coords.resize(theta.coords.size());
    for (std::size_t j = 0; j < theta.coords.size(); ++j)
        out.coords[j] = wrap_2pi(theta.coords[j] - two_pi * alpha.alpha[j]);
    return out;
}

TorusPoint shift_n(const TorusPoint& theta, const FrequencyVector& alpha,
                   std::int64_t n) {
    if (theta.dim() != alpha.dim()) throw Error("shift_n: dimension mismatch");
    TorusPoint out;
    out.coords.resize(theta.coords.size());
    const std::int64_t an = n < 0 ? -n : n;
    for (std::size_t j = 0; j < theta.coords.size(); ++j) {
        double f = frac_mul(an, alpha.alpha[j]);
        if (n < 0 && f > 0.0) f = 1.0 - f;
        out.coords[j] = wrap_2pi(theta.coords[j] + two_pi * f);
    }
    return out;
}

TrigPotential TrigPotential::zero(int nu) {
    TrigPotential p;
    p.nu = nu;
    return p;
}

TrigPotential TrigPotential::almost_mathieu(double u) {
    TrigPotential p;
    p.nu = 1;
    p.terms.push_back({{1}, u, 0.0});
    return p;
}

double TrigPotential::eval(const TorusPoint& theta) const {
    if (theta.dim() != nu) throw Error("TrigPotential::eval: dimension mismatch");
    double out = 0.0;
    for (const auto& t : terms) {
        double phase = 0.0;
        for (int j = 0; j < nu; ++j) phase += t.m[std::size_t(j)] * theta[j];
        out += t.cos_amp * std::cos(phase) + t.sin_amp * std::sin(phase);
    }
    return out;
}

double TrigPotential::eval1(double theta) const {
    double out = 0.0;
    for (const auto& t : terms) {
        const double phase = t.m[0] * theta;
        out += t.cos_amp * std::cos(phase) + t.sin_amp * std::sin(phase);
    }
    return out;
}

std::vector<double> orbit_sample(const TrigPotential& pot, const TorusPoint& theta0,
                                 const FrequencyVector& alpha, std::int64_t n) {
    if (n < 1) throw Error("orbit_sample: n must be >= 1");
    if (n > (std::int64_t(1) << 40))
        throw Error("orbit_sample: n = " + std::to_string(n) + " exceeds the 2^40 cap");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (pot.is_zero()) return v;
    if (pot.nu == 1) {
        const double th0 = theta0[0];
        const double a = alpha.alpha[0];
        for (std::int64_t j = 0; j < n; ++j)
            v[std::size_t(j)] = pot.eval1(wrap_2pi(th0 + two_pi * frac_mul(j, a)));
    } else {
        for (std::int64_t j = 0; j < n; ++j)
            v[std::size_t(j)] = pot.eval(shift_n(theta0, alpha, j));
    }
    return v;
}

}  // namespace qps
