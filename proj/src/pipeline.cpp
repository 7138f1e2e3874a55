#include "pipeline.hpp"

#include "conv.hpp"
#include "errors.hpp"

#include <cmath>
#include <cstdio>

namespace spiral {

using nlohmann::json;

Filterbank make_beta_bank(int Q, int J, const std::vector<double>& resolutions) {
    return build_modulation_bank(ModAxis::Logfreq, resolutions, 2 * static_cast<std::size_t>(Q) * J, Q);
}

Filterbank make_gamma_bank(int J, const std::vector<double>& resolutions) {
    return build_modulation_bank(ModAxis::Octave, resolutions, 2 * static_cast<std::size_t>(J), 1.0);
}

Scalogram run_scalogram(const RunConfig& c, const std::vector<double>& x, double sample_rate) {
    validate(c);
    require(sample_rate == c.sample_rate, "input sample rate " + std::to_string(sample_rate) +
                                              " differs from the configured sample_rate");
    const auto fb = build_order1(c.Q, c.J, signal_grid_size(x.size()), sample_rate);
    return cqt(x, sample_rate, fb, c.hop);
}

ScatteringCoefficients run_scatter(const RunConfig& c, const Scalogram& x1, TransformKind kind) {
    const auto alpha = build_alpha_bank(x1.frames, x1.frame_rate, c.alpha_min);
    switch (kind) {
    case TransformKind::Temporal: return scatter_temporal(x1, alpha);
    case TransformKind::Joint: return scatter_joint(x1, alpha, make_beta_bank(c.Q, c.J, c.beta_resolutions));
    case TransformKind::Spiral:
        return scatter_spiral(to_spiral(x1), alpha, make_beta_bank(c.Q, c.J, c.beta_resolutions),
                              make_gamma_bank(c.J, c.gamma_resolutions));
    }
    throw ParameterError("unknown transform kind");
}

namespace {

std::string label(const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", name, v);
    return buf;
}

} // namespace

Tensor scalogram_tensor(const Scalogram& sc) {
    Tensor t;
    t.dims = {sc.frames, sc.channels};
    t.values = sc.values;
    for (double l : sc.lambda1) t.column_labels.push_back(label("lambda1_hz", l));
    return t;
}

Tensor scattering_tensor(const ScatteringCoefficients& x2) {
    Tensor t;
    const std::size_t cols = 4 + x2.frames;
    t.dims = {x2.paths.size(), cols};
    t.column_labels = {"lambda1_hz", "alpha", "beta", "gamma"};
    for (std::size_t n = 0; n < x2.frames; ++n)
        t.column_labels.push_back(label("t", static_cast<double>(n) / x2.frame_rate));
    t.values.reserve(x2.paths.size() * cols);
    for (std::size_t p = 0; p < x2.paths.size(); ++p) {
        const auto& path = x2.paths[p];
        t.values.push_back(x2.lambda1[path.lambda1_index]);
        t.values.push_back(path.alpha);
        t.values.push_back(path.beta);
        t.values.push_back(path.gamma);
        t.values.insert(t.values.end(), x2.series(p), x2.series(p) + x2.frames);
    }
    return t;
}

json to_json(const PlaneFit& f) {
    return json{{"estimated_source_velocity", f.estimated_source_velocity},
                {"estimated_filter_velocity", f.estimated_filter_velocity},
                {"residual", f.residual},
                {"t", f.t},
                {"mass_fraction", f.mass_fraction}};
}

json plane_report(const RunConfig& c, const std::vector<double>& x, double sample_rate) {
    const auto x1 = run_scalogram(c, x, sample_rate);
    const auto x2 = run_scatter(c, x1, TransformKind::Spiral);
    PlaneFitOptions opt;
    opt.reference_energy = window_energy(x1);
    return to_json(fit_plane(x2, opt));
}

json harmonicity_report(const RunConfig& c, const std::vector<double>& x, double sample_rate) {
    const auto x1 = run_scalogram(c, x, sample_rate);
    const auto s1 = average_time(x1, c.T);
    return json{{"harmonicity_residual", harmonicity_residual(s1, make_gamma_bank(c.J, c.gamma_resolutions))},
                {"spectral_regularity_residual",
                 spectral_regularity_residual(s1, make_beta_bank(c.Q, c.J, c.beta_resolutions))}};
}

json spin_report(const RunConfig& c, const std::vector<double>& x, double sample_rate, double t0, double t1) {
    const auto x1 = run_scalogram(c, x, sample_rate);
    auto kind = transform_kind_from_string(c.transform_kind);
    if (kind == TransformKind::Temporal) kind = TransformKind::Spiral;
    const auto x2 = run_scatter(c, x1, kind);
    require(t0 >= 0 && t1 > t0, "spin window must satisfy 0 <= t0 < t1");
    const auto b = static_cast<std::size_t>(std::llround(t0 * x2.frame_rate));
    const auto e = std::min(x2.frames, static_cast<std::size_t>(std::llround(t1 * x2.frame_rate)));
    require(b < e, "spin window is empty");
    const auto s = spin_asymmetry(x2, b, e);
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"beta_ratio", num(s.beta_ratio)}, {"gamma_ratio", num(s.gamma_ratio)},
                {"t0", t0}, {"t1", t1}, {"transform_kind", to_string(kind)}};
}

json frame_report(const RunConfig& c, std::size_t grid_size) {
    validate(c);
    const auto fb = build_order1(c.Q, c.J, grid_size, c.sample_rate);
    const auto d = littlewood_paley(fb, LowpassKernel{c.T});
    return json{{"A", d.lower_bound}, {"B", d.upper_bound}, {"band_lo", d.band_lo},
                {"band_hi", d.band_hi}, {"Q", c.Q}, {"J", c.J}, {"grid_size", grid_size}};
}

} // namespace spiral
