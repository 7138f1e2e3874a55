#pragma once

#include "sourcefilter.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace spiral {

struct RunConfig {
    int Q = 16;
    int J = 8;
    double T = 0.37;
    double sample_rate = 16000.0;
    std::size_t hop = 128;
    double alpha_min = 1.0;
    std::vector<double> beta_resolutions{0.25, 0.5, 1.0, 2.0};
    // 1 cycle per octave index would sit above the octave-axis Nyquist
    std::vector<double> gamma_resolutions{0.25, 0.5};
    std::string transform_kind = "spiral";
    std::string input;
    nlohmann::json synth;  // null when the input is a file
    std::string output;
    std::string format = "csv";

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
void validate(const RunConfig& c);

// Either a single source-filter spec, a chain of segments, or a comb:
//   {"source": {...}, "filter": {...}, "partials": 6, "envelope": {"width": 1},
//    "duration": 2, "sample_rate": 16000, "segments": [{"duration": 1.5,
//    "source_velocity": -0.25, "filter_velocity": -1}, ...]}
//   {"comb": {"f0": 52.2, "partials": 150, "stretch": 0.02}, "duration": 1.5, "sample_rate": 16000}
Synthesis synthesize_from_json(const nlohmann::json& spec, int analysis_Q = 16, int analysis_J = 8);

} // namespace spiral
