#pragma once

#include "filterbank.hpp"
#include "scalogram.hpp"

#include <array>
#include <vector>

namespace spiral {

// beta = 0 / gamma = 0 mean the axis is absent for this transform kind.
struct Path {
    std::size_t lambda1_index = 0;
    double alpha = 0;
    double beta = 0;
    double gamma = 0;

    bool operator==(const Path&) const = default;
};

enum class TransformKind { Temporal, Joint, Spiral };

struct ScatteringCoefficients {
    std::vector<Path> paths;
    std::vector<double> values;  // [paths x frames]
    std::size_t frames = 0;
    double frame_rate = 0;
    bool averaged = false;
    TransformKind kind = TransformKind::Temporal;
    std::vector<double> lambda1;
    int Q = 1;

    const double* series(std::size_t p) const { return values.data() + p * frames; }
};

enum class Axis { Time, Logfreq, Octave };

// Temporal bank sized for a scalogram with `frames` frames.
Filterbank build_alpha_bank(std::size_t frames, double frame_rate, double alpha_min);

ScatteringCoefficients scatter_temporal(const Scalogram& sc, const Filterbank& bank_alpha);
ScatteringCoefficients scatter_joint(const Scalogram& sc, const Filterbank& bank_alpha,
                                     const Filterbank& bank_beta);
// `order` fixes the sequence of the three axis convolutions; the result does not
// depend on it up to rounding.
ScatteringCoefficients scatter_spiral(const SpiralTensor& sp, const Filterbank& bank_alpha,
                                      const Filterbank& bank_beta, const Filterbank& bank_gamma,
                                      std::array<Axis, 3> order = {Axis::Time, Axis::Logfreq,
                                                                   Axis::Octave});

ScatteringCoefficients average_scattering(const ScatteringCoefficients& x2, double T);

const char* to_string(TransformKind k);
TransformKind transform_kind_from_string(const std::string& s);

} // namespace spiral
