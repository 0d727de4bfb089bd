#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qps/riccati.hpp"

namespace qps {

// Candidate Bloch-Floquet pair data: psi_0, psi_{-1} on a theta grid, the
// fitted quasi-momentum k of the candidate, and its energy.
struct BFCandidate {
    ThetaGrid grid;
    std::vector<Complex> psi0;
    std::vector<Complex> psim1;
    double k = 0.0;
    double energy = 0.0;
};

// psi_n = e^{ikn} at E = 2 cos k; the exactly reducible reference candidate.
BFCandidate plane_wave_candidate(double k, int grid_size);

// Solves the cohomological equation h - h o S = -(kappa - mean) over the low
// Fourier modes, splitting the covariance phase into a constant momentum plus
// a removable coboundary. dispersion measures what the solve cannot absorb
// (high modes and near-resonant denominators): the reducibility defect.
struct AlignedGauge {
    double k = 0.0;                // constant part of kappa - pi, in (-pi, pi]
    double dispersion = 0.0;       // circular std of the unresolved remainder
    double dispersion_raw = 0.0;   // circular std of kappa before alignment
    std::vector<Complex> phase;    // unit phases g(theta) applied to the pair
};

AlignedGauge align_gauge(const CovariantField& field, const FrequencyVector& alpha,
                         int m_align = 0 /* 0: grid/8 */,
                         double denom_floor = 1e-3);

// Builds the A-covariant direction (-phi_0, phi_{-1}) from a covariant field;
// its one-step phase is kappa - pi, which becomes the candidate momentum.
// With align = true the coboundary part of the phase is gauged away first.
BFCandidate candidate_from_field(const CovariantField& field, double energy,
                                 const FrequencyVector& alpha, bool align = true);

Complex wronskian(const BFCandidate& cand, int idx);
// theta must lie on the grid (within 1e-9)
Complex wronskian(const BFCandidate& cand, const TorusPoint& theta);

struct WronskianStats {
    Complex mean;
    double max_dev = 0.0;      // max |W(theta) - mean|
    double rel_variance = 0.0; // variance / |mean|^2
};
WronskianStats wronskian_stats(const BFCandidate& cand);

// -psi_0/psi_{-1}; pole error when psi_{-1} vanishes.
Complex riccati_ratio(const BFCandidate& cand, int idx);
Complex riccati_ratio(const BFCandidate& cand, const TorusPoint& theta);

// max_theta |psi_0(theta) - e^{ik} psi_{-1}(S theta)|: the testable n = -1
// covariance of the candidate.
double covariance_defect(const BFCandidate& cand, const FrequencyVector& alpha);

// max_theta || Z(S theta)^{-1} A(E,theta) Z(theta) - diag(e^{-ik}, e^{ik}) ||_max
// with Z built column-wise from (conj psi, psi). Throws ConditioningError when
// |det Z| falls below det_floor * scale^2.
double reducibility_residual(const BFCandidate& cand, const TrigPotential& pot,
                             const FrequencyVector& alpha, double det_floor = 1e-8);

struct Quasimomentum {
    double k = 0.0;          // circular mean of kappa, (-pi, pi]
    double dispersion = 0.0; // circular std; inf when the resultant vanishes
    double resultant = 0.0;
};
Quasimomentum quasimomentum(const CovariantField& field);

// min over |m|_inf <= m_max of the circle distance between |k|/pi and
// frac(m . alpha); zero distance marks a Koopman-resonant momentum.
double resonance_distance(double k, const FrequencyVector& alpha, int m_max);

// Gap-labeling consistency: |k|/2pi matches (+-n/2 + m . alpha) mod 1 within
// tol for some |m|_inf <= m_max. Both branches are admissible.
bool ids_momentum_check(double k, double n, const FrequencyVector& alpha, int m_max,
                        double tol);

struct BfOptions {
    int grid_size = 512;
    double eta = 1e-3;
    GreenOptions green;
    int m_max = 50;
    double ids_tol = 2e-2;
    std::int64_t ids_steps = 100000;
    par::Exec exec = par::Exec::openmp;
    int workers = 0;
};

// Full per-energy diagnostic row as emitted by the bf_diagnostics experiment.
struct BFReport {
    double energy = 0.0;
    double k = 0.0;
    double dispersion = 0.0;
    double wronskian_im = 0.0;
    double wronskian_rel_variance = 0.0;
    double reducibility_residual = 0.0;
    double resonance_distance_at_m = 0.0;
    double ids_value = 0.0;
    bool check_passed = false;
};

BFReport bf_diagnostics(double energy, const TrigPotential& pot,
                        const FrequencyVector& alpha, const TorusPoint& theta0,
                        const BfOptions& opts = {});

}  // namespace qps
