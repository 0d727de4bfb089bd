#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qps/rng.hpp"

namespace qps::stats {

// Quantile with linear interpolation at rank q*(n-1) (midpoint-interpolation
// convention: quantile({0,1}, 0.25) = 0.25).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - double(lo);
    return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

inline double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    return quantile_sorted(xs, q);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

inline double iqr(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return quantile_sorted(xs, 0.75) - quantile_sorted(xs, 0.25);
}

struct Ci {
    double lo = 0.0;
    double hi = 0.0;
};

// Percentile bootstrap (2.5%..97.5%) of a statistic of a real sample.
// Deterministic given the seed; resample r draws from stream (seed, r).
template <typename Stat>
Ci bootstrap_ci(std::span<const double> xs, Stat&& stat, int n_resamples,
                std::uint64_t seed) {
    const std::size_t n = xs.size();
    if (n == 0) throw std::invalid_argument("bootstrap of empty sample");
    std::vector<double> stats(n_resamples);
    std::vector<double> resample(n);
    for (int r = 0; r < n_resamples; ++r) {
        rng::Stream s(seed, rng::Ctx::bootstrap, std::uint64_t(r));
        for (std::size_t i = 0; i < n; ++i) resample[i] = xs[s.index_below(n)];
        stats[r] = stat(resample);
    }
    std::sort(stats.begin(), stats.end());
    return {quantile_sorted(stats, 0.025), quantile_sorted(stats, 0.975)};
}

// Circular statistics on angles (radians). mean in (-pi, pi]; std is the
// circular standard deviation sqrt(-2 ln R); R -> 0 gives std -> inf.
struct Circular {
    double mean = 0.0;
    double resultant = 0.0;  // R in [0, 1]
    double stddev = 0.0;
};

inline Circular circular_stats(std::span<const double> angles) {
    if (angles.empty()) throw std::invalid_argument("circular_stats of empty sample");
    double c = 0.0, s = 0.0;
    for (double a : angles) {
        c += std::cos(a);
        s += std::sin(a);
    }
    c /= double(angles.size());
    s /= double(angles.size());
    Circular out;
    out.resultant = std::hypot(c, s);
    out.mean = std::atan2(s, c);
    if (out.mean <= -M_PI) out.mean = M_PI;
    out.stddev = out.resultant > 0.0
                     ? std::sqrt(std::max(0.0, -2.0 * std::log(out.resultant)))
                     : std::numeric_limits<double>::infinity();
    return out;
}

// Distance on the circle R/Z.
inline double circle_dist_mod1(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace qps::stats
