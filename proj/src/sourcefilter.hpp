#pragma once

#include <string>
#include <vector>

namespace spiral {

// Exponential time warp: rate(t) = initial_rate * 2^(velocity * t).
struct Diffeo {
    double initial_rate = 1.0;  // Hz
    double velocity = 0.0;      // octaves per second
};

struct DiffeoState {
    double theta = 0;                  // radians
    double theta_dot = 0;              // radians per second
    double relative_acceleration = 0;  // θ̈/θ̇, per second (natural log units)
};

DiffeoState eval_diffeo(const Diffeo& d, double t);

// Log-magnitude quadratic bump ĥ(u) = exp(-(log2 u)^2 / (2 width^2)), u being
// frequency over the current envelope center. `flat` gives ĥ = 1.
struct Envelope {
    double width = 1.0;  // octaves
    bool flat = false;
};

struct SourceFilterSpec {
    Diffeo source;  // initial_rate is f0
    Diffeo filter;  // initial_rate is the envelope center
    int partials = 1;
    Envelope envelope;
    double duration = 1.0;
    double sample_rate = 16000.0;
    // analysis bank the hypotheses are checked against
    int analysis_Q = 16;
    int analysis_J = 8;
};

struct Synthesis {
    std::vector<double> samples;
    std::vector<std::string> warnings;
};

double envelope_gain(const Envelope& e, double u);

Synthesis synthesize(const SourceFilterSpec& spec);

// Consecutive segments with continuous phase and rates: every segment after the
// first starts from the rates reached at the end of the previous one, so only
// its velocities, duration and partial count are read.
Synthesis synthesize_chain(const std::vector<SourceFilterSpec>& segments);

// Σ_p cos(2π p f0 (1 + stretch p) t); stretch = 0 is the harmonic comb.
std::vector<double> harmonic_comb(double f0, int partials, double duration, double sample_rate,
                                  double stretch = 0.0);

} // namespace spiral
