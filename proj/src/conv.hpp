#pragma once

#include "fft.hpp"

#include <cstddef>
#include <vector>

namespace spiral {

// numpy-style 'reflect' index (edge sample not repeated) for any integer i.
std::size_t reflect_index(long long i, std::size_t len);

// FFT grid used for a reflect-padded time axis of `len` samples.
std::size_t time_grid_size(std::size_t len);

// A family of equally shaped 1-D lines inside a flat buffer.
struct LineSet {
    std::vector<std::size_t> starts;
    std::size_t length = 0;
    std::size_t stride = 1;
};

// Circular convolution of every line, after padding it to resp.size() samples.
// Reflect padding centers the line in the grid; zero padding appends zeros.
void convolve_lines_reflect(std::vector<cplx>& data, const LineSet& lines,
                            const std::vector<cplx>& resp);
void convolve_lines_zero(std::vector<cplx>& data, const LineSet& lines,
                         const std::vector<cplx>& resp);

// Lines of a row-major [rows x cols] matrix.
LineSet column_lines(std::size_t rows, std::size_t cols);
LineSet row_lines(std::size_t rows, std::size_t cols);

} // namespace spiral
