// Command-line front end over the C API.
#include "spiral/spiral.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Failure {
    int code;
};

int exit_code(spiral_status s) {
    switch (s) {
    case SPIRAL_OK: return 0;
    case SPIRAL_ERR_PARAM:
    case SPIRAL_ERR_FIT: return 2;
    case SPIRAL_ERR_IO:
    case SPIRAL_ERR_WAV_MALFORMED:
    case SPIRAL_ERR_WAV_UNSUPPORTED: return 3;
    default: return 1;
    }
}

void check(spiral_status s) {
    const char* w = spiral_last_warnings();
    if (w && *w) std::cerr << "warning: " << w << "\n";
    if (s != SPIRAL_OK) {
        std::cerr << "error: " << spiral_last_error() << "\n";
        throw Failure{exit_code(s)};
    }
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "error: cannot read '" << path << "'\n";
        throw Failure{3};
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Flags shared by every subcommand; unset ones leave the config untouched.
struct ConfigFlags {
    std::string config_path;
    std::optional<int> Q, J;
    std::optional<double> T, sample_rate, alpha_min;
    std::optional<std::size_t> hop;
    std::optional<std::vector<double>> beta, gamma;
    std::optional<std::string> kind, input, synth, output, format;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "RunConfig JSON file");
        app->add_option("--Q", Q, "filters per octave");
        app->add_option("--J", J, "octaves");
        app->add_option("--T", T, "averaging support in seconds");
        app->add_option("--sample-rate", sample_rate, "expected input sample rate (Hz)");
        app->add_option("--hop", hop, "scalogram hop in samples (power of two)");
        app->add_option("--alpha-min", alpha_min, "lowest temporal modulation frequency (Hz)");
        app->add_option("--beta-resolutions", beta, "cycles per octave")->delimiter(',');
        app->add_option("--gamma-resolutions", gamma, "cycles per octave index")->delimiter(',');
        app->add_option("--kind,--transform-kind", kind, "temporal, joint or spiral");
        app->add_option("--input", input, "input WAV file");
        app->add_option("--synth", synth, "synthesis spec JSON file used instead of --input");
        app->add_option("--output", output, "output path");
        app->add_option("--format", format, "csv, bin, pgm or json");
    }

    spiral_config* build() const {
        spiral_config* cfg = nullptr;
        if (config_path.empty()) check(spiral_config_new(&cfg));
        else check(spiral_config_from_json(slurp(config_path).c_str(), &cfg));
        auto set = [&](const char* key, const nlohmann::json& v) {
            const auto s = v.dump();
            const auto st = spiral_config_set(cfg, key, s.c_str());
            if (st != SPIRAL_OK) spiral_config_free(cfg);
            check(st);
        };
        if (Q) set("Q", *Q);
        if (J) set("J", *J);
        if (T) set("T", *T);
        if (sample_rate) set("sample_rate", *sample_rate);
        if (hop) set("hop", *hop);
        if (alpha_min) set("alpha_min", *alpha_min);
        if (beta) set("beta_resolutions", *beta);
        if (gamma) set("gamma_resolutions", *gamma);
        if (kind) set("transform_kind", *kind);
        if (input) set("input", *input);
        if (synth) {
            nlohmann::json spec;
            try {
                spec = nlohmann::json::parse(slurp(*synth));
            } catch (const nlohmann::json::exception& e) {
                spiral_config_free(cfg);
                std::cerr << "error: bad synth spec: " << e.what() << "\n";
                throw Failure{2};
            }
            set("synth", spec);
        }
        if (output) set("output", *output);
        if (format) set("format", *format);
        return cfg;
    }
};

nlohmann::json config_json(const spiral_config* cfg) {
    char* s = nullptr;
    check(spiral_config_to_json(cfg, &s));
    auto j = nlohmann::json::parse(s);
    spiral_string_free(s);
    return j;
}

void emit_report(char* report, const nlohmann::json& cfg) {
    const std::string text = nlohmann::json::parse(report).dump(2);
    spiral_string_free(report);
    std::cout << text << "\n";
    const auto out = cfg.value("output", std::string());
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "error: cannot write '" << out << "'\n";
            throw Failure{3};
        }
        f << text << "\n";
    }
}

struct Owned {
    spiral_config* cfg = nullptr;
    spiral_signal* sig = nullptr;
    spiral_tensor* ten = nullptr;
    ~Owned() {
        spiral_tensor_free(ten);
        spiral_signal_free(sig);
        spiral_config_free(cfg);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Spiral scattering transform toolkit"};
    app.require_subcommand(1);

    ConfigFlags flags;
    bool averaged = false, inverted = false, float32 = false;
    std::string which;
    double t0 = 0, t1 = -1;

    auto* scal = app.add_subcommand("scalogram", "WAV or synth spec to x1 (or S1 with --averaged)");
    auto* scat = app.add_subcommand("scatter", "second-order scattering (x2, or S2 with --averaged)");
    auto* syn = app.add_subcommand("synth", "synthesis spec JSON to WAV");
    auto* val = app.add_subcommand("validate", "run a validation oracle and print a JSON report");
    auto* frm = app.add_subcommand("frame-check", "Littlewood-Paley bounds of the first-order bank");
    for (auto* s : {scal, scat, syn, val, frm}) flags.attach(s);
    for (auto* s : {scal, scat}) {
        s->add_flag("--averaged", averaged, "apply the phi_T low-pass");
        s->add_flag("--inverted", inverted, "dark means large in pgm output");
    }
    syn->add_flag("--float32", float32, "write IEEE float samples instead of PCM16");
    val->add_option("which", which, "plane, harmonicity or spin")
        ->required()
        ->check(CLI::IsMember({"plane", "harmonicity", "spin"}));
    val->add_option("--t0", t0, "spin window start (s)");
    val->add_option("--t1", t1, "spin window end (s), default end of signal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Owned o;
    o.cfg = flags.build();
    const auto cj = config_json(o.cfg);
    const auto out = cj.value("output", std::string());
    const auto fmt = cj.value("format", std::string("csv"));

    if (*frm) {
        char* r = nullptr;
        check(spiral_frame_check(o.cfg, &r));
        emit_report(r, cj);
        return 0;
    }

    check(spiral_signal_from_config(o.cfg, &o.sig));

    if (*syn) {
        if (out.empty()) {
            std::cerr << "error: synth needs --output\n";
            return 2;
        }
        check(spiral_signal_write_wav(o.sig, out.c_str(), float32 ? 1 : 0));
        return 0;
    }
    if (*scal || *scat) {
        if (out.empty()) {
            std::cerr << "error: --output is required\n";
            return 2;
        }
        if (*scal) check(spiral_scalogram(o.cfg, o.sig, averaged, &o.ten));
        else check(spiral_scatter(o.cfg, o.sig, averaged, &o.ten));
        check(spiral_tensor_write(o.ten, fmt.c_str(), out.c_str(), inverted));
        return 0;
    }
    char* r = nullptr;
    if (which == "plane") check(spiral_validate_plane(o.cfg, o.sig, &r));
    else if (which == "harmonicity") check(spiral_validate_harmonicity(o.cfg, o.sig, &r));
    else {
        const double dur = static_cast<double>(spiral_signal_length(o.sig)) / spiral_signal_sample_rate(o.sig);
        check(spiral_validate_spin(o.cfg, o.sig, t0, t1 < 0 ? dur : t1, &r));
    }
    emit_report(r, cj);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Failure& f) {
        return f.code;
    }
}
