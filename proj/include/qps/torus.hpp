#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qps/errors.hpp"

namespace qps {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Reduce to [0, 2*pi).
double wrap_2pi(double x);
// Reduce to (-pi, pi].
double wrap_pi(double x);
// frac(n * a) in [0, 1), with the product error compensated through an fma
// so long orbits carry no accumulated phase drift.
double frac_mul(std::int64_t n, double a);

// Point on the torus [0, 2*pi)^nu, radians.
struct TorusPoint {
    std::vector<double> coords;

    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> c);
    static TorusPoint zero(int nu);

    int dim() const { return int(coords.size()); }
    double operator[](int j) const { return coords[std::size_t(j)]; }
};

// Shift frequencies in cycles; the 2*pi factor is applied at shift time.
struct FrequencyVector {
    std::vector<double> alpha;

    FrequencyVector() = default;
    explicit FrequencyVector(std::vector<double> a) : alpha(std::move(a)) {}
    static FrequencyVector golden();  // (sqrt(5)-1)/2, nu = 1

    int dim() const { return int(alpha.size()); }
};

// Looks for an integer vector m != 0, |m|_inf <= m_check, with m.alpha integer;
// returns it if found (the frequency is then not usable as an ergodic shift).
std::optional<std::vector<int>> find_resonant_m(const FrequencyVector& alpha,
                                                int m_check, double tol = 1e-9);

TorusPoint shift(const TorusPoint& theta, const FrequencyVector& alpha);
TorusPoint shift_back(const TorusPoint& theta, const FrequencyVector& alpha);
// n-fold shift via frac(n*alpha): O(1) and drift-free for any n.
TorusPoint shift_n(const TorusPoint& theta, const FrequencyVector& alpha,
                   std::int64_t n);

// Finite trigonometric series U(theta) = sum_m a_m cos(m.theta) + b_m sin(m.theta).
struct TrigPotential {
    struct Term {
        std::vector<int> m;
        double cos_amp = 0.0;
        double sin_amp = 0.0;
    };

    int nu = 1;
    std::vector<Term> terms;

    static TrigPotential zero(int nu = 1);
    // U(theta) = u cos(theta), nu = 1
    static TrigPotential almost_mathieu(double u);

    double eval(const TorusPoint& theta) const;
    // nu = 1 fast path used by orbit loops
    double eval1(double theta) const;
    bool is_zero() const { return terms.empty(); }
};

// [U(S^j theta0)] for j = 0..n-1.
std::vector<double> orbit_sample(const TrigPotential& pot, const TorusPoint& theta0,
                                 const FrequencyVector& alpha, std::int64_t n);

}  // namespace qps
