#include "config.hpp"

#include "errors.hpp"
#include "io.hpp"
#include "scattering.hpp"

#include <set>

namespace spiral {

using nlohmann::json;

json to_json(const RunConfig& c) {
    json j;
    j["Q"] = c.Q;
    j["J"] = c.J;
    j["T"] = c.T;
    j["sample_rate"] = c.sample_rate;
    j["hop"] = c.hop;
    j["alpha_min"] = c.alpha_min;
    j["beta_resolutions"] = c.beta_resolutions;
    j["gamma_resolutions"] = c.gamma_resolutions;
    j["transform_kind"] = c.transform_kind;
    j["input"] = c.input;
    j["synth"] = c.synth;
    j["output"] = c.output;
    j["format"] = c.format;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ParameterError("run config must be a JSON object");
    static const std::set<std::string> known{"Q", "J", "T", "sample_rate", "hop", "alpha_min",
                                             "beta_resolutions", "gamma_resolutions",
                                             "transform_kind", "input", "synth", "output", "format"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ParameterError("unknown run config field '" + k + "'");
    RunConfig c;
    try {
        if (j.contains("Q")) c.Q = j["Q"].get<int>();
        if (j.contains("J")) c.J = j["J"].get<int>();
        if (j.contains("T")) c.T = j["T"].get<double>();
        if (j.contains("sample_rate")) c.sample_rate = j["sample_rate"].get<double>();
        if (j.contains("hop")) c.hop = j["hop"].get<std::size_t>();
        if (j.contains("alpha_min")) c.alpha_min = j["alpha_min"].get<double>();
        if (j.contains("beta_resolutions")) c.beta_resolutions = j["beta_resolutions"].get<std::vector<double>>();
        if (j.contains("gamma_resolutions")) c.gamma_resolutions = j["gamma_resolutions"].get<std::vector<double>>();
        if (j.contains("transform_kind")) c.transform_kind = j["transform_kind"].get<std::string>();
        if (j.contains("input")) c.input = j["input"].get<std::string>();
        if (j.contains("synth")) c.synth = j["synth"];
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        if (j.contains("format")) c.format = j["format"].get<std::string>();
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad run config value: ") + e.what());
    }
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    require(c.Q >= 1, "Q must be at least 1");
    require(c.J >= 1, "J must be at least 1");
    require(c.T > 0, "T must be positive");
    require(c.sample_rate > 0, "sample_rate must be positive");
    require(is_power_of_two(c.hop), "hop must be a power of two");
    require(c.alpha_min > 0, "alpha_min must be positive");
    require(c.alpha_min < c.sample_rate / static_cast<double>(c.hop) / 2,
            "alpha_min must lie below the frame-rate Nyquist");
    require(!c.beta_resolutions.empty(), "beta_resolutions must not be empty");
    require(!c.gamma_resolutions.empty(), "gamma_resolutions must not be empty");
    for (double b : c.beta_resolutions) require(b > 0 && b <= c.Q / 2.0, "beta resolution out of range");
    for (double g : c.gamma_resolutions) require(g > 0 && g <= 0.5, "gamma resolution out of range");
    transform_kind_from_string(c.transform_kind);
    matrix_format_from_string(c.format);
    require(c.synth.is_null() || c.synth.is_object(), "synth must be an object");
}

namespace {

Diffeo diffeo_from(const json& j) {
    Diffeo d;
    d.initial_rate = j.at("initial_rate").get<double>();
    d.velocity = j.value("velocity", 0.0);
    return d;
}

} // namespace

Synthesis synthesize_from_json(const json& spec, int analysis_Q, int analysis_J) {
    try {
        const double duration = spec.value("duration", 1.0);
        const double fs = spec.value("sample_rate", 16000.0);
        if (spec.contains("comb")) {
            const auto& c = spec["comb"];
            Synthesis s;
            s.samples = harmonic_comb(c.at("f0").get<double>(), c.at("partials").get<int>(), duration, fs,
                                      c.value("stretch", 0.0));
            return s;
        }
        SourceFilterSpec base;
        base.source = diffeo_from(spec.at("source"));
        base.filter = diffeo_from(spec.at("filter"));
        base.partials = spec.value("partials", 1);
        if (spec.contains("envelope")) {
            base.envelope.width = spec["envelope"].value("width", 1.0);
            base.envelope.flat = spec["envelope"].value("flat", false);
        }
        base.duration = duration;
        base.sample_rate = fs;
        base.analysis_Q = analysis_Q;
        base.analysis_J = analysis_J;
        if (!spec.contains("segments")) return synthesize(base);
        std::vector<SourceFilterSpec> segs;
        for (const auto& sj : spec["segments"]) {
            SourceFilterSpec s = base;
            s.duration = sj.at("duration").get<double>();
            s.source.velocity = sj.value("source_velocity", 0.0);
            s.filter.velocity = sj.value("filter_velocity", 0.0);
            segs.push_back(s);
        }
        return synthesize_chain(segs);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad synth spec: ") + e.what());
    }
}

} // namespace spiral
