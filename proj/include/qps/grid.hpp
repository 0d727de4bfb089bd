#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qps/torus.hpp"

namespace qps {

// Uniform periodic grid on [0, 2*pi), nu = 1. Power-of-two sizes keep the
// shifted-lookup arithmetic exact.
struct ThetaGrid {
    int size = 0;

    static ThetaGrid uniform(int n);
    double theta(int i) const { return two_pi * double(i) / double(size); }
    std::vector<double> thetas() const;
};

// Periodic linear interpolation of a field sampled on the grid.
std::complex<double> interp_linear(std::span<const std::complex<double>> f,
                                   double theta);
double interp_linear(std::span<const double> f, double theta);

}  // namespace qps
