#pragma once

#include "filterbank.hpp"

#include <vector>

namespace spiral {

// x1 (or S1): [frames x channels], channels ascending in λ1.
struct Scalogram {
    std::vector<double> values;
    std::size_t frames = 0;
    std::size_t channels = 0;
    double sample_rate = 0;
    std::size_t hop = 1;
    double frame_rate = 0;
    std::vector<double> lambda1;
    int Q = 1;
    int J = 1;

    double at(std::size_t n, std::size_t i) const { return values[n * channels + i]; }
};

// values[(n*Q + chroma)*J + octave] = x1[n, octave*Q + chroma]
struct SpiralTensor {
    std::vector<double> values;
    std::size_t frames = 0;
    int Q = 1;
    int J = 1;
    double sample_rate = 0;
    std::size_t hop = 1;
    double frame_rate = 0;
    std::vector<double> lambda1;

    double at(std::size_t n, int chroma, int octave) const {
        return values[(n * Q + chroma) * J + octave];
    }
};

// Grid used by default for a signal of `len` samples: 2 * next power of two.
std::size_t signal_grid_size(std::size_t len);

Scalogram cqt(const std::vector<double>& signal, double sample_rate, const Filterbank& fb,
              std::size_t hop);

// Convolve each channel with φ_T along time. With decimate, the frame rate is
// divided by the largest power of two that keeps it at or above 2/T.
Scalogram average_time(const Scalogram& sc, double T, bool decimate = false);

SpiralTensor to_spiral(const Scalogram& sc);
Scalogram from_spiral(const SpiralTensor& sp);

} // namespace spiral
