#include "qps/cocycle.hpp"

#include <cmath>
#include <string>

#include "qps/stats.hpp"

namespace qps {

TransferMatrix transfer_matrix(double energy, const TrigPotential& pot,
                               const TorusPoint& theta) {
    return {energy - pot.eval(theta), -1.0, 1.0, 0.0};
}

namespace {

// Shared transfer-orbit pass: renormalized log-norm accumulation and the
// Dirichlet oscillation count. Starting vector (psi_0, psi_{-1}) = (1, 0).
struct OrbitResult {
    double lyap = 0.0;
    double ids = 0.0;
};

OrbitResult run_orbit(double energy, std::span<const double> orbit) {
    const std::int64_t n = std::int64_t(orbit.size());
    if (n < 1) throw Error("cocycle orbit must have length >= 1");
    double x = 1.0, y = 0.0;  // (psi_{j}, psi_{j-1})
    double log_sum = 0.0;
    int sign_prev = 1;  // sign of psi_0 = 1
    std::int64_t changes = 0;
    for (std::int64_t j = 0; j < n; ++j) {
        const double t = energy - orbit[std::size_t(j)];
        const double nx = t * x - y;
        y = x;
        x = nx;
        if (x > 0.0) {
            if (sign_prev < 0) ++changes;
            sign_prev = 1;
        } else if (x < 0.0) {
            if (sign_prev > 0) ++changes;
            sign_prev = -1;
        } else {
            // exact zero counts once; the recursion forces the strict flip
            // psi_{n+1} = -psi_{n-1}, so the crossing is complete here
            ++changes;
            sign_prev = -sign_prev;
        }
        if ((j & 15) == 15) {
            const double s = std::fabs(x) + std::fabs(y);
            if (!std::isfinite(s) || s == 0.0)
                throw Error("cocycle orbit became non-finite at step " +
                            std::to_string(j));
            log_sum += std::log(s);
            x /= s;
            y /= s;
        }
    }
    const double tail = std::fabs(x) + std::fabs(y);
    if (!std::isfinite(tail) || tail == 0.0)
        throw Error("cocycle orbit became non-finite at final step");
    OrbitResult out;
    out.lyap = (log_sum + std::log(tail)) / double(n);
    out.ids = 1.0 - double(changes) / double(n);
    return out;
}

}  // namespace

double lyapunov(double energy, std::span<const double> orbit) {
    return run_orbit(energy, orbit).lyap;
}

double lyapunov(double energy, const TrigPotential& pot, const FrequencyVector& alpha,
                const TorusPoint& theta0, std::int64_t n) {
    return lyapunov(energy, orbit_sample(pot, theta0, alpha, n));
}

double ids(double energy, std::span<const double> orbit) {
    return run_orbit(energy, orbit).ids;
}

double ids(double energy, const TrigPotential& pot, const FrequencyVector& alpha,
           const TorusPoint& theta0, std::int64_t n) {
    return ids(energy, orbit_sample(pot, theta0, alpha, n));
}

std::vector<double> energy_grid(double e_min, double e_max, double step) {
    if (step <= 0.0) throw Error("energy grid step must be positive");
    if (e_max < e_min) throw Error("energy grid max must be >= min");
    const std::int64_t n = std::int64_t(std::round((e_max - e_min) / step)) + 1;
    std::vector<double> es(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) es[std::size_t(i)] = e_min + double(i) * step;
    return es;
}

SpectralGrid sweep_cocycle(const TrigPotential& pot, const FrequencyVector& alpha,
                           const TorusPoint& theta0, std::span<const double> energies,
                           const SweepOptions& opts) {
    SpectralGrid grid;
    grid.energies.assign(energies.begin(), energies.end());
    grid.gamma.resize(energies.size());
    if (opts.with_ids) grid.ids_val.resize(energies.size());
    const auto orbit = orbit_sample(pot, theta0, alpha, opts.n_steps);
    par::for_index(std::int64_t(energies.size()), opts.exec, opts.workers,
                   [&](std::int64_t i) {
                       const auto r = run_orbit(energies[std::size_t(i)], orbit);
                       grid.gamma[std::size_t(i)] = std::max(0.0, r.lyap);
                       if (opts.with_ids) grid.ids_val[std::size_t(i)] = r.ids;
                   });
    return grid;
}

AcClassification classify_ac(SpectralGrid& grid, double gamma_tol) {
    if (grid.energies.empty()) throw Error("classify_ac: empty grid");
    if (gamma_tol <= 0.0) throw Error("classify_ac: gamma_tol must be positive");
    for (std::size_t i = 1; i < grid.energies.size(); ++i)
        if (grid.energies[i] <= grid.energies[i - 1])
            throw Error("classify_ac: energies must be strictly increasing");
    const std::size_t n = grid.energies.size();
    grid.ac.assign(n, 0);
    AcClassification out;
    std::size_t i = 0;
    while (i < n) {
        if (grid.gamma[i] > gamma_tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && grid.gamma[j + 1] <= gamma_tol) ++j;
        for (std::size_t k = i; k <= j; ++k) grid.ac[k] = 1;
        out.intervals.push_back({grid.energies[i], grid.energies[j]});
        out.total_measure += grid.energies[j] - grid.energies[i];
        i = j + 1;
    }
    return out;
}

std::vector<GapLabel> gap_labels(const SpectralGrid& grid, const FrequencyVector& alpha,
                                 double gamma_tol, int m_max) {
    if (grid.ids_val.size() != grid.energies.size())
        throw Error("gap_labels: grid must carry ids values");
    std::vector<GapLabel> out;
    const std::size_t n = grid.energies.size();
    std::size_t i = 0;
    while (i < n) {
        if (grid.gamma[i] <= gamma_tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && grid.gamma[j + 1] > gamma_tol) ++j;
        // a gap needs at least two grid points and a locally constant ids
        if (j > i) {
            double lo = grid.ids_val[i], hi = grid.ids_val[i];
            std::vector<double> vals(grid.ids_val.begin() + std::ptrdiff_t(i),
                                     grid.ids_val.begin() + std::ptrdiff_t(j + 1));
            for (double v : vals) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo < 1e-2) {
                GapLabel g;
                g.gap = {grid.energies[i], grid.energies[j]};
                g.ids_value = stats::median(vals);
                g.distance = 2.0;  // sentinel, any circle distance is <= 1/2
                if (alpha.dim() == 1) {
                    const double a = alpha.alpha[0];
                    for (int m = -m_max; m <= m_max; ++m) {
                        double f = m * a;
                        f -= std::floor(f);
                        const double d = stats::circle_dist_mod1(g.ids_value, f);
                        if (d < g.distance) {
                            g.distance = d;
                            g.m = {m};
                            g.frac_m_alpha = f;
                        }
                    }
                } else {
                    throw Error("gap_labels: only nu = 1 frequencies supported");
                }
                out.push_back(std::move(g));
            }
        }
        i = j + 1;
    }
    return out;
}

}  // namespace qps
