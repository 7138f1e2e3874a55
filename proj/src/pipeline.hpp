#pragma once

#include "config.hpp"
#include "io.hpp"
#include "scalogram.hpp"
#include "scattering.hpp"
#include "validation.hpp"

#include <json.hpp>

namespace spiral {

Filterbank make_beta_bank(int Q, int J, const std::vector<double>& resolutions);
Filterbank make_gamma_bank(int J, const std::vector<double>& resolutions);

Scalogram run_scalogram(const RunConfig& c, const std::vector<double>& x, double sample_rate);
ScatteringCoefficients run_scatter(const RunConfig& c, const Scalogram& x1, TransformKind kind);

Tensor scalogram_tensor(const Scalogram& sc);
// One row per path: lambda1_hz, alpha, beta, gamma, then the time series.
Tensor scattering_tensor(const ScatteringCoefficients& x2);

nlohmann::json to_json(const PlaneFit& f);

nlohmann::json plane_report(const RunConfig& c, const std::vector<double>& x, double sample_rate);
nlohmann::json harmonicity_report(const RunConfig& c, const std::vector<double>& x, double sample_rate);
nlohmann::json spin_report(const RunConfig& c, const std::vector<double>& x, double sample_rate,
                           double t0, double t1);
nlohmann::json frame_report(const RunConfig& c, std::size_t grid_size = 1u << 16);

} // namespace spiral
