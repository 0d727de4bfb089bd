#include "qps/oracle.hpp"

#include <cmath>

#include "qps/errors.hpp"

namespace qps::oracle {

int eigencount_below(std::span<const double> diag, double energy) {
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - energy - (i > 0 ? 1.0 / q : 0.0);
        if (q == 0.0) q = 1e-300;  // exact-hit guard, eigenvalue counts below
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> truncated_diagonal(const TrigPotential& pot,
                                       const FrequencyVector& alpha,
                                       const TorusPoint& theta, std::int64_t size) {
    return orbit_sample(pot, theta, alpha, size);
}

double eigencount_ids(const TrigPotential& pot, const FrequencyVector& alpha,
                      const TorusPoint& theta, std::int64_t size, double energy) {
    const auto d = truncated_diagonal(pot, alpha, theta, size);
    return double(eigencount_below(d, energy)) / double(size);
}

double spectrum_coverage_measure(std::span<const double> diag,
                                 std::span<const double> energies, int min_count) {
    if (energies.size() < 2) throw Error("coverage measure needs >= 2 grid energies");
    double measure = 0.0;
    int below_prev = eigencount_below(diag, energies[0]);
    for (std::size_t i = 1; i < energies.size(); ++i) {
        const int below = eigencount_below(diag, energies[i]);
        if (below - below_prev >= min_count) measure += energies[i] - energies[i - 1];
        below_prev = below;
    }
    return measure;
}

std::complex<double> free_green(std::complex<double> z) {
    const std::complex<double> w = std::sqrt(z * z - 4.0);
    const std::complex<double> g1 = 0.5 * (-z + w);
    const std::complex<double> g2 = 0.5 * (-z - w);
    return g1.imag() > g2.imag() ? g1 : g2;
}

double free_lyapunov(double energy) {
    const double a = std::fabs(energy) / 2.0;
    return a <= 1.0 ? 0.0 : std::acosh(a);
}

double thouless_lyapunov(double energy, std::span<const double> energies,
                         std::span<const double> ids_values) {
    if (energies.size() != ids_values.size() || energies.size() < 2)
        throw Error("thouless_lyapunov: need matching grids with >= 2 points");
    // integral over a cell of log|E - x| dx / cell, exact up to xi log xi -> 0
    auto cell_mean_log = [energy](double a, double b) {
        auto f = [energy](double x) {
            const double t = x - energy;
            return t == 0.0 ? 0.0 : t * std::log(std::fabs(t));
        };
        return (f(b) - f(a)) / (b - a) - 1.0;
    };
    double total = 0.0;
    for (std::size_t i = 1; i < energies.size(); ++i) {
        const double dn = ids_values[i] - ids_values[i - 1];
        if (dn != 0.0) total += dn * cell_mean_log(energies[i - 1], energies[i]);
    }
    return total;
}

}  // namespace qps::oracle
