#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qps/parallel.hpp"
#include "qps/torus.hpp"

namespace qps {

// One-step Schrodinger transfer matrix [[E - U, -1], [1, 0]], det = 1.
struct TransferMatrix {
    double a, b, c, d;

    double det() const { return a * d - b * c; }
    void apply(double& x, double& y) const {
        const double nx = a * x + b * y;
        y = c * x + d * y;
        x = nx;
    }
};

TransferMatrix transfer_matrix(double energy, const TrigPotential& pot,
                               const TorusPoint& theta);

// Lyapunov exponent of the transfer cocycle along a precomputed potential
// orbit: (1/N) log |A_{N-1} ... A_0 (1,0)^T|, renormalized every 16 steps.
double lyapunov(double energy, std::span<const double> orbit);
double lyapunov(double energy, const TrigPotential& pot, const FrequencyVector& alpha,
                const TorusPoint& theta0, std::int64_t n);

// Integrated density of states from the oscillation count of the Dirichlet
// solution: 1 - (sign changes)/N. 0 below the spectrum, 1 above, 1/2 at the
// free band center.
double ids(double energy, std::span<const double> orbit);
double ids(double energy, const TrigPotential& pot, const FrequencyVector& alpha,
           const TorusPoint& theta0, std::int64_t n);

// Per-energy diagnostics over a sorted grid. gamma is clamped at 0 (the
// estimator noise floor sits well below every tolerance in use).
struct SpectralGrid {
    std::vector<double> energies;
    std::vector<double> gamma;
    std::vector<double> ids_val;   // empty unless requested
    std::vector<std::uint8_t> ac;  // filled by classify_ac
};

struct SweepOptions {
    std::int64_t n_steps = 100000;
    bool with_ids = true;
    par::Exec exec = par::Exec::openmp;
    int workers = 0;
};

std::vector<double> energy_grid(double e_min, double e_max, double step);

SpectralGrid sweep_cocycle(const TrigPotential& pot, const FrequencyVector& alpha,
                           const TorusPoint& theta0, std::span<const double> energies,
                           const SweepOptions& opts = {});

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

struct AcClassification {
    std::vector<Interval> intervals;
    double total_measure = 0.0;
};

// Maximal runs of grid points with gamma <= gamma_tol; the numerical stand-in
// for the essential closure of {gamma = 0}. Marks grid.ac as a side effect.
AcClassification classify_ac(SpectralGrid& grid, double gamma_tol);

// Gaps detected on a swept grid (gamma > gamma_tol runs) with their ids label
// and the best frequency-module match m, |m| <= m_max.
struct GapLabel {
    Interval gap;
    double ids_value = 0.0;
    std::vector<int> m;
    double frac_m_alpha = 0.0;
    double distance = 0.0;  // circle distance of ids_value to frac(m.alpha)
};

std::vector<GapLabel> gap_labels(const SpectralGrid& grid, const FrequencyVector& alpha,
                                 double gamma_tol, int m_max);

}  // namespace qps
