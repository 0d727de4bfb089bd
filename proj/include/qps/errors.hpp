#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mobius step applied at a pole (gamma = 0), or a vanishing psi_{-1}.
struct PoleError : Error {
    using Error::Error;
};

// Backward recursion not depth-stable; carries both trial values.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, std::complex<double> at_depth,
                     std::complex<double> at_double_depth)
        : Error(msg), value_at_depth(at_depth), value_at_double_depth(at_double_depth) {}
    std::complex<double> value_at_depth;
    std::complex<double> value_at_double_depth;
};

// Near-singular conjugation matrix; carries the offending grid location.
struct ConditioningError : Error {
    ConditioningError(const std::string& msg, double theta_at)
        : Error(msg), theta(theta_at) {}
    double theta;
};

}  // namespace qps
