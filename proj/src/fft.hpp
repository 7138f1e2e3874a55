#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spiral {

using cplx = std::complex<double>;

// In-place complex DFT of any length. The inverse is scaled by 1/N.
void fft_forward(std::vector<cplx>& data);
void fft_inverse(std::vector<cplx>& data);
void fft_forward(cplx* data, std::size_t n);
void fft_inverse(cplx* data, std::size_t n);

// DFT bin frequencies in numpy order: 0, 1, ..., N/2-1, -N/2, ..., -1 (times rate/N).
std::vector<double> fft_frequencies(std::size_t n, double rate);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_power_of_two(std::size_t n);

} // namespace spiral
