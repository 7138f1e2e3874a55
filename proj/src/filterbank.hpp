#pragma once

#include "fft.hpp"
#include "wavelets.hpp"

#include <vector>

namespace spiral {

enum class BankKind { Order1, Order2Time, ModulationLogfreq, ModulationOctave };
enum class ModAxis { Logfreq, Octave };

// For modulation banks `centers` holds the signed labels β (or γ). The filter
// stored under label r has its spectral peak at -r, so that a positive label
// answers to ridges that rise over time.
struct Filterbank {
    BankKind kind = BankKind::Order1;
    std::vector<double> centers;
    std::vector<std::vector<cplx>> responses;
    int Q = 1;
    int J = 1;
    std::size_t grid_size = 0;
    double sample_rate = 1.0;  // samples per axis unit (Hz, samples/octave, 1 per octave)
    double fmax = 0;           // order1: nominal top center

    std::size_t size() const { return centers.size(); }
};

struct FrameDiagnostics {
    double lower_bound = 0;  // A
    double upper_bound = 0;  // B
    double band_lo = 0;
    double band_hi = 0;
    double scale = 1;        // power gain applied to the wavelets
};

constexpr double kDefaultFmaxRatio = 0.4;
constexpr int kGammatoneOrder = 4;

// Centers f_max * 2^-(j + χ/Q), stored ascending; index i = j1*Q + χ1 counted
// from the lowest octave.
Filterbank build_order1(int Q, int J, std::size_t grid_size, double sample_rate,
                        double fmax_ratio = kDefaultFmaxRatio);
double order1_center(int Q, int J, double fmax, std::size_t index);

// Q = 1 gammatones at alpha_min * 2^k strictly below frame_rate / 2.
Filterbank build_order2_time(std::size_t grid_size, double frame_rate, double alpha_min);

// axis_rate: samples per axis unit (Q for log-frequency, 1 for octave index).
Filterbank build_modulation_bank(ModAxis axis, const std::vector<double>& resolutions,
                                 std::size_t grid_size, double axis_rate,
                                 bool include_zero = false);

// Measured over the nominal span of order-1 centers [λ_min, f_max].
FrameDiagnostics littlewood_paley(const Filterbank& fb, const LowpassKernel& lowpass);

// Same bank with the wavelets scaled by the largest gain keeping the
// Littlewood-Paley sum (low-pass included) at or below 1.
Filterbank renormalized(const Filterbank& fb, const LowpassKernel& lowpass);

// Force zero mean and zero first moment of the circular impulse response.
void null_low_moments(std::vector<cplx>& response);

} // namespace spiral
