#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qps/torus.hpp"

namespace qps::oracle {

// Number of eigenvalues strictly below E of the Jacobi matrix
// tridiag(1, diag, 1) with Dirichlet ends, by Sturm pivot counting.
// Independent of the transfer-matrix estimators it cross-checks.
int eigencount_below(std::span<const double> diag, double energy);

// Diagonal U(S^j theta), j = 0..size-1, of the truncated operator.
std::vector<double> truncated_diagonal(const TrigPotential& pot,
                                       const FrequencyVector& alpha,
                                       const TorusPoint& theta, std::int64_t size);

// Fraction of truncated-matrix eigenvalues below E.
double eigencount_ids(const TrigPotential& pot, const FrequencyVector& alpha,
                      const TorusPoint& theta, std::int64_t size, double energy);

// Lebesgue measure of grid cells holding >= min_count eigenvalues of the
// truncated matrix: a brute-force stand-in for the spectrum's measure.
double spectrum_coverage_measure(std::span<const double> diag,
                                 std::span<const double> energies, int min_count);

// Positive-imaginary root of G^2 + z G + 1 = 0: the free half-line Green
// function in closed form.
std::complex<double> free_green(std::complex<double> z);

// Free Lyapunov exponent arccosh(|E|/2) outside [-2,2], 0 inside.
double free_lyapunov(double energy);

// Thouless formula: gamma(E) = integral of log|E - x| d(ids)(x), with the
// log-singular cell integrated in closed form.
double thouless_lyapunov(double energy, std::span<const double> energies,
                         std::span<const double> ids_values);

}  // namespace qps::oracle
