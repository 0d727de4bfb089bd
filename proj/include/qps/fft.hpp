#pragma once

#include <complex>
#include <vector>

namespace qps {

// In-place radix-2 FFT; size must be a power of two. Unnormalized forward,
// inverse carries the 1/n.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// Signed mode index of slot j in an n-point FFT: 0, 1, .., n/2, -(n/2-1), .., -1.
int fft_mode(std::size_t j, std::size_t n);

}  // namespace qps
