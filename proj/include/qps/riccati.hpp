#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qps/grid.hpp"
#include "qps/parallel.hpp"
#include "qps/torus.hpp"

namespace qps {

using Complex = std::complex<double>;

// Spectral parameter z = E + i*eta, eta >= 0. eta = 0 is a boundary-value
// request and only the eta-regularized map itself accepts it.
struct ComplexEnergy {
    double e = 0.0;
    double eta = 0.0;

    Complex value() const { return {e, eta}; }
};

// One projective cocycle step gamma -> U(theta) - E + i*eta - 1/gamma.
// Herglotz: Im(result) = eta + Im(gamma)/|gamma|^2, so the closed upper half
// plane maps into itself for eta >= 0.
Complex mobius_step(const ComplexEnergy& z, const TrigPotential& pot,
                    const TorusPoint& theta, Complex gamma);
Complex mobius_step_u(const ComplexEnergy& z, double u_at_theta, Complex gamma);

// Backward Riccati recursion gamma_n = 1/(v(n) - z - gamma_{n+1}) seeded at
// gamma_depth, returning gamma_0. v(n) is the site potential.
Complex riccati_backward(const ComplexEnergy& z,
                         const std::function<double(std::int64_t)>& v,
                         std::int64_t depth, Complex seed = {0.0, 1.0});

struct GreenOptions {
    std::int64_t depth = 0;        // 0: auto, max(1e4, ceil(20/eta))
    double stability_tol = 1e-8;   // doubling-check threshold
    bool check_stability = true;
};

std::int64_t default_green_depth(double eta);

// Half-line Green function (H^+(theta) - z)^{-1}(0,0) by backward recursion
// over V_n = U(S^n theta). Throws ConvergenceError when doubling the depth
// moves the result by more than stability_tol.
Complex halfline_green(const ComplexEnergy& z, const TrigPotential& pot,
                       const FrequencyVector& alpha, const TorusPoint& theta,
                       const GreenOptions& opts = {});

// Gamma, the eigenstate components of eq-type phi_{-1} = 1/sqrt(Im Gamma),
// phi_0 = phi_{-1} Gamma, and the covariance phase kappa on a uniform grid.
struct CovariantField {
    ThetaGrid grid;
    std::vector<Complex> gamma;
    std::vector<double> phi_m1;   // real positive by construction
    std::vector<Complex> phi_0;
    std::vector<double> kappa;    // in (-pi, pi]

    bool has_state() const { return !phi_m1.empty(); }
};

// Fills Gamma by independent halfline_green calls per grid point.
CovariantField make_green_field(const ComplexEnergy& z, const TrigPotential& pot,
                                const FrequencyVector& alpha, int grid_size,
                                const GreenOptions& opts = {},
                                par::Exec exec = par::Exec::openmp, int workers = 0);

// max_theta |Gamma(theta) - 1/(U(theta) - z - Gamma(S theta))| with the
// shifted value interpolated from the field.
double cocycle_residual(const CovariantField& field, const ComplexEnergy& z,
                        const TrigPotential& pot, const FrequencyVector& alpha);

// Runs the backward recursion from each seed over the same orbit; the max
// pairwise distance of the results probes the contraction behind uniqueness.
double uniqueness_probe(const ComplexEnergy& z, const TrigPotential& pot,
                        const FrequencyVector& alpha, const TorusPoint& theta,
                        std::span<const Complex> seeds, std::int64_t depth);

// Fills phi_{-1}, phi_0, kappa from Gamma. Rejects if Im Gamma <= 0 anywhere.
void covariant_state(CovariantField& field, const FrequencyVector& alpha);

// CSV with columns theta, Re Gamma, Im Gamma, phi_m1, Re phi_0, Im phi_0, kappa.
std::string covariant_field_csv(const CovariantField& field);

}  // namespace qps
