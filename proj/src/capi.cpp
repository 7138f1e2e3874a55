#include "spiral/spiral.h"

#include "config.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

struct spiral_config {
    spiral::RunConfig cfg;
};

struct spiral_signal {
    std::vector<double> samples;
    double sample_rate = 0;
};

struct spiral_tensor {
    spiral::Tensor t;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_warnings;

template <typename F>
spiral_status guarded(F&& f) {
    last_error.clear();
    last_warnings.clear();
    try {
        f();
        return SPIRAL_OK;
    } catch (const spiral::WavError& e) {
        last_error = e.what();
        switch (e.kind) {
        case spiral::WavErrorKind::Malformed: return SPIRAL_ERR_WAV_MALFORMED;
        case spiral::WavErrorKind::Unsupported: return SPIRAL_ERR_WAV_UNSUPPORTED;
        default: return SPIRAL_ERR_IO;
        }
    } catch (const spiral::ParameterError& e) {
        last_error = e.what();
        return SPIRAL_ERR_PARAM;
    } catch (const spiral::IoError& e) {
        last_error = e.what();
        return SPIRAL_ERR_IO;
    } catch (const spiral::FitError& e) {
        last_error = e.what();
        return SPIRAL_ERR_FIT;
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("invalid JSON: ") + e.what();
        return SPIRAL_ERR_PARAM;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SPIRAL_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return SPIRAL_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw spiral::ParameterError(std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void add_warnings(const std::vector<std::string>& w) {
    for (const auto& s : w) {
        if (!last_warnings.empty()) last_warnings += '\n';
        last_warnings += s;
    }
}

spiral::Synthesis synth(const spiral::RunConfig& c, const nlohmann::json& spec) {
    auto s = spiral::synthesize_from_json(spec, c.Q, c.J);
    add_warnings(s.warnings);
    return s;
}

} // namespace

extern "C" {

const char* spiral_version(void) { return "1.0.0"; }
const char* spiral_last_error(void) { return last_error.c_str(); }
const char* spiral_last_warnings(void) { return last_warnings.c_str(); }
void spiral_string_free(char* s) { std::free(s); }

spiral_status spiral_config_new(spiral_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new spiral_config();
    });
}

spiral_status spiral_config_from_json(const char* json, spiral_config** out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        auto c = spiral::run_config_from_json(nlohmann::json::parse(json));
        *out = new spiral_config{std::move(c)};
    });
}

spiral_status spiral_config_to_json(const spiral_config* cfg, char** out_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out_json, "out_json");
        *out_json = dup(spiral::to_json(cfg->cfg).dump());
    });
}

spiral_status spiral_config_set(spiral_config* cfg, const char* key, const char* value_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(key, "key");
        need(value_json, "value_json");
        auto j = spiral::to_json(cfg->cfg);
        if (!j.contains(key)) throw spiral::ParameterError(std::string("unknown run config field '") + key + "'");
        j[key] = nlohmann::json::parse(value_json);
        cfg->cfg = spiral::run_config_from_json(j);
    });
}

void spiral_config_free(spiral_config* cfg) { delete cfg; }

spiral_status spiral_signal_read_wav(const char* path, spiral_signal** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        auto w = spiral::read_wav(path);
        add_warnings(w.warnings);
        *out = new spiral_signal{std::move(w.samples), w.sample_rate};
    });
}

spiral_status spiral_signal_from_samples(const double* samples, size_t n, double sample_rate,
                                         spiral_signal** out) {
    return guarded([&] {
        need(out, "out");
        if (n) need(samples, "samples");
        spiral::require(sample_rate > 0, "sample rate must be positive");
        *out = new spiral_signal{std::vector<double>(samples, samples + n), sample_rate};
    });
}

spiral_status spiral_signal_synthesize(const spiral_config* cfg, const char* spec_json, spiral_signal** out) {
    return guarded([&] {
        need(spec_json, "spec_json");
        need(out, "out");
        const spiral::RunConfig c = cfg ? cfg->cfg : spiral::RunConfig{};
        const auto spec = nlohmann::json::parse(spec_json);
        auto s = synth(c, spec);
        *out = new spiral_signal{std::move(s.samples), spec.value("sample_rate", 16000.0)};
    });
}

spiral_status spiral_signal_from_config(const spiral_config* cfg, spiral_signal** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        const auto& c = cfg->cfg;
        if (!c.synth.is_null()) {
            auto s = synth(c, c.synth);
            *out = new spiral_signal{std::move(s.samples), c.synth.value("sample_rate", 16000.0)};
            return;
        }
        if (c.input.empty()) throw spiral::ParameterError("no input file or synth spec given");
        auto w = spiral::read_wav(c.input);
        add_warnings(w.warnings);
        *out = new spiral_signal{std::move(w.samples), w.sample_rate};
    });
}

spiral_status spiral_signal_write_wav(const spiral_signal* sig, const char* path, int float32) {
    return guarded([&] {
        need(sig, "sig");
        need(path, "path");
        double peak = 0;
        for (double v : sig->samples) peak = std::max(peak, std::abs(v));
        if (peak <= 1) {
            spiral::write_wav(path, sig->samples, sig->sample_rate,
                              float32 ? spiral::WavEncoding::Float32 : spiral::WavEncoding::Pcm16);
            return;
        }
        // synthesized signals are bounded by the partial count, not by 1; rescale instead of clipping
        auto x = sig->samples;
        for (auto& v : x) v /= peak;
        add_warnings({"samples scaled by 1/" + std::to_string(peak) + " to fit [-1, 1]"});
        spiral::write_wav(path, x, sig->sample_rate,
                          float32 ? spiral::WavEncoding::Float32 : spiral::WavEncoding::Pcm16);
    });
}

size_t spiral_signal_length(const spiral_signal* sig) { return sig ? sig->samples.size() : 0; }
double spiral_signal_sample_rate(const spiral_signal* sig) { return sig ? sig->sample_rate : 0.0; }
const double* spiral_signal_data(const spiral_signal* sig) { return sig ? sig->samples.data() : nullptr; }
void spiral_signal_free(spiral_signal* sig) { delete sig; }

spiral_status spiral_scalogram(const spiral_config* cfg, const spiral_signal* sig, int averaged,
                               spiral_tensor** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(sig, "sig");
        need(out, "out");
        auto x1 = spiral::run_scalogram(cfg->cfg, sig->samples, sig->sample_rate);
        if (averaged) x1 = spiral::average_time(x1, cfg->cfg.T);
        *out = new spiral_tensor{spiral::scalogram_tensor(x1)};
    });
}

spiral_status spiral_scatter(const spiral_config* cfg, const spiral_signal* sig, int averaged,
                             spiral_tensor** out) {
    return guarded([&] {
        need(cfg, "cfg");
        need(sig, "sig");
        need(out, "out");
        const auto x1 = spiral::run_scalogram(cfg->cfg, sig->samples, sig->sample_rate);
        auto x2 = spiral::run_scatter(cfg->cfg, x1, spiral::transform_kind_from_string(cfg->cfg.transform_kind));
        if (averaged) x2 = spiral::average_scattering(x2, cfg->cfg.T);
        *out = new spiral_tensor{spiral::scattering_tensor(x2)};
    });
}

size_t spiral_tensor_ndim(const spiral_tensor* t) { return t ? t->t.dims.size() : 0; }
size_t spiral_tensor_dim(const spiral_tensor* t, size_t axis) {
    return t && axis < t->t.dims.size() ? t->t.dims[axis] : 0;
}
const double* spiral_tensor_data(const spiral_tensor* t) { return t ? t->t.values.data() : nullptr; }

spiral_status spiral_tensor_write(const spiral_tensor* t, const char* format, const char* path, int inverted) {
    return guarded([&] {
        need(t, "tensor");
        need(format, "format");
        need(path, "path");
        spiral::write_matrix(t->t, spiral::matrix_format_from_string(format), path, inverted != 0);
    });
}

void spiral_tensor_free(spiral_tensor* t) { delete t; }

spiral_status spiral_validate_plane(const spiral_config* cfg, const spiral_signal* sig, char** out_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(sig, "sig");
        need(out_json, "out_json");
        *out_json = dup(spiral::plane_report(cfg->cfg, sig->samples, sig->sample_rate).dump());
    });
}

spiral_status spiral_validate_harmonicity(const spiral_config* cfg, const spiral_signal* sig, char** out_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(sig, "sig");
        need(out_json, "out_json");
        *out_json = dup(spiral::harmonicity_report(cfg->cfg, sig->samples, sig->sample_rate).dump());
    });
}

spiral_status spiral_validate_spin(const spiral_config* cfg, const spiral_signal* sig, double t0, double t1,
                                   char** out_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(sig, "sig");
        need(out_json, "out_json");
        *out_json = dup(spiral::spin_report(cfg->cfg, sig->samples, sig->sample_rate, t0, t1).dump());
    });
}

spiral_status spiral_frame_check(const spiral_config* cfg, char** out_json) {
    return guarded([&] {
        need(cfg, "cfg");
        need(out_json, "out_json");
        *out_json = dup(spiral::frame_report(cfg->cfg).dump());
    });
}

} // extern "C"
