#pragma once

#include "fft.hpp"

#include <vector>

namespace spiral {

enum class WaveletFamily { Morlet, Gammatone };

struct WaveletKernel {
    WaveletFamily family = WaveletFamily::Gammatone;
    double center_frequency = 1.0;  // cycles per axis unit
    double quality = 1.0;
    int order = 4;                  // gammatone only
    bool is_signed = false;         // also emit the negative-frequency mirror
};

struct LowpassKernel {
    double support = 1.0;  // T, in axis units (seconds for time)
};

// Gammatone shape constants for ξ = 1: |ψ̂(w)| ∝ w / |b + i(w - c)|^n on w > 0.
// b sets the -3 dB width to 1/Q, c puts the peak exactly at w = 1.
struct GammatoneShape {
    double b = 0.0;
    double c = 0.0;
    double norm = 1.0;  // makes the peak magnitude 1
};
GammatoneShape gammatone_shape(double Q, int order);
// Response at normalized frequency w = ω/ξ, equal to 1 at w = 1 and 0 for w <= 0.
cplx gammatone_eval(const GammatoneShape& s, int order, double w);

std::vector<cplx> morlet_response(double xi, double Q, const std::vector<double>& omega);
std::vector<cplx> gammatone_response(double xi, double Q, int order,
                                     const std::vector<double>& omega);
std::vector<double> gaussian_lowpass_response(double T, const std::vector<double>& omega);

// Single-frequency evaluations (no grid).
cplx gammatone_at(double xi, double Q, int order, double omega);
double gaussian_lowpass_at(double T, double omega);

// Sample a kernel on an FFT grid of n bins at the given axis rate.
std::vector<cplx> sample_kernel(const WaveletKernel& k, std::size_t n, double rate);

// Spin flip on a DFT grid: out[k] = conj(in[(N - k) mod N]), i.e. the conjugate
// wavelet in the time domain. The envelope keeps its direction.
std::vector<cplx> mirror_response(const std::vector<cplx>& r);

// Measured -3 dB width of a sampled magnitude response around its peak,
// with linear interpolation between bins. Grid must be in fft order.
double half_power_width(const std::vector<cplx>& r, const std::vector<double>& omega);

} // namespace spiral
