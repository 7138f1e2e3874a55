// Acceptance criteria, one PASS/FAIL line each. Exit status is the number of failures.
#include "helpers.hpp"
#include "config.hpp"
#include "conv.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "sourcefilter.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace spiral;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kFs = 16000;
int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "spiral_acceptance";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cli(const std::string& args, const fs::path& out = {}) {
    const std::string cmd = std::string("\"") + SPIRAL_CLI + "\" " + args + " > \"" +
                            (out.empty() ? std::string("/dev/null") : out.string()) + "\" 2>/dev/null";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json source_filter_spec(double vs, double vf) {
    return json{{"source", {{"initial_rate", 400}, {"velocity", vs}}},
                {"filter", {{"initial_rate", 800}, {"velocity", vf}}},
                {"partials", 6},
                {"duration", 2.0},
                {"sample_rate", kFs}};
}

Scalogram scalogram_of(const std::vector<double>& x, std::size_t hop = 128) {
    return cqt(x, kFs, build_order1(16, 8, signal_grid_size(x.size()), kFs), hop);
}

void plane_equation() {
    const auto spec = scratch("headline.json");
    std::ofstream(spec) << source_filter_spec(-1, 0.5).dump();
    const auto out = scratch("headline_report.json");
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = cli("validate plane --synth " + spec.string(), out);
    const double dt = seconds_since(t0);
    if (rc != 0) {
        report(1, "plane equation", false, fmt("validate plane exited %d", rc));
        return;
    }
    const auto j = json::parse(slurp(out));
    const double c1 = j["estimated_source_velocity"], c2 = j["estimated_filter_velocity"], m = j["mass_fraction"];
    const bool ok = std::abs(c1 + 1) <= 0.2 && std::abs(c2 - 0.5) <= 0.1 && c1 < 0 && c2 > 0 && m >= 0.5 && dt <= 60;
    report(1, "plane equation", ok,
           fmt("source %.3f (want -1 +-20%%), filter %.3f (want 0.5 +-20%%), mass %.3f, residual %.3f, %.1f s", c1, c2,
               m, j["residual"].get<double>(), dt));
}

void zero_velocity() {
    RunConfig c;
    const auto x = synthesize_from_json(source_filter_spec(0, 0)).samples;
    const auto x1 = run_scalogram(c, x, kFs);
    const auto x2 = run_scatter(c, x1, TransformKind::Spiral);
    PlaneFitOptions o;
    o.reference_energy = window_energy(x1);
    std::vector<PairEstimate> pairs;
    const auto f = fit_plane(x2, o, &pairs);
    double amin = 1e300, worst = 0;
    for (const auto& p : x2.paths) amin = std::min(amin, p.alpha);
    for (const auto& p : pairs)
        worst = std::max(worst, std::abs(f.estimated_source_velocity * p.beta + f.estimated_filter_velocity * p.gamma));
    report(2, "zero-velocity control", worst <= 2 * amin,
           fmt("source %.3f, filter %.3f; largest predicted alpha %.3f Hz (one bin above alpha_min %.3f Hz allowed)",
               f.estimated_source_velocity, f.estimated_filter_velocity, worst, amin));
}

void harmonicity() {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig c;
    const auto fb = build_order1(c.Q, c.J, signal_grid_size(24000), kFs);
    const double f0 = fb.centers[0];
    const int P = static_cast<int>(7900 / f0);
    int Ps = P;
    while (Ps * f0 * (1 + 0.02 * Ps) >= 7900) --Ps;
    const auto g = make_gamma_bank(c.J, c.gamma_resolutions);
    const double rh = harmonicity_residual(average_time(cqt(harmonic_comb(f0, P, 1.5, kFs), kFs, fb, c.hop), c.T), g);
    const double rs =
        harmonicity_residual(average_time(cqt(harmonic_comb(f0, Ps, 1.5, kFs, 0.02), kFs, fb, c.hop), c.T), g);
    const double dt = seconds_since(t0);
    report(3, "harmonicity", rh <= 0.2 && rs >= 2 * rh && dt <= 10,
           fmt("harmonic %.3f (want <= 0.2), stretched %.3f (ratio %.2f, want >= 2), %.1f s", rh, rs, rs / rh, dt));
}

void spin() {
    RunConfig c;
    c.alpha_min = 2;
    json spec{{"source", {{"initial_rate", 400}}},
              {"filter", {{"initial_rate", 800}}},
              {"partials", 6},
              {"sample_rate", kFs},
              {"segments",
               {{{"duration", 1.5}, {"source_velocity", -0.25}, {"filter_velocity", -1}},
                {{"duration", 1.5}, {"source_velocity", 0.25}, {"filter_velocity", 1}}}}};
    const auto x = synthesize_from_json(spec).samples;
    const auto down = spin_report(c, x, kFs, 0.375, 1.125), up = spin_report(c, x, kFs, 1.875, 2.625);
    auto val = [](const json& v) { return v.is_null() ? std::nan("") : v.get<double>(); };
    const double db = val(down["beta_ratio"]), dg = val(down["gamma_ratio"]);
    const double ub = val(up["beta_ratio"]), ug = val(up["gamma_ratio"]);
    const bool segs = db < 1 && dg < 1 && ub > 1 && ug > 1;

    RunConfig n;
    double nb = 0, ng = 0;
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto r = spin_report(n, th::white(32000, 500 + seed), kFs, 0.5, 1.5);
        nb += val(r["beta_ratio"]) / 10;
        ng += val(r["gamma_ratio"]) / 10;
    }
    const bool noise = std::abs(nb - 1) <= 0.1 && std::abs(ng - 1) <= 0.1;
    report(4, "spin asymmetry", segs && noise,
           fmt("falling beta %.3f gamma %.3f; rising beta %.3f gamma %.3f; noise mean over 10 seeds beta %.3f gamma %.3f",
               db, dg, ub, ug, nb, ng));
}

void frame_quality() {
    const auto r = frame_report(RunConfig{});
    const double A = r["A"], B = r["B"];
    report(5, "frame quality", std::abs(B - 1) <= 1e-12 && A >= 0.75,
           fmt("A %.4f, B %.12f over [%.1f, %.1f] Hz", A, B, r["band_lo"].get<double>(), r["band_hi"].get<double>()));
}

// Direct circular convolution of the reflect-padded signal, then modulus.
Scalogram direct_cqt(const std::vector<double>& x, const Filterbank& fb, std::size_t hop) {
    const std::size_t n = fb.grid_size, len = x.size(), left = (n - len) / 2;
    std::vector<double> padded(n);
    for (std::size_t m = 0; m < n; ++m)
        padded[m] = x[reflect_index(static_cast<long long>(m) - static_cast<long long>(left), len)];
    Scalogram sc;
    sc.frames = (len + hop - 1) / hop;
    sc.channels = fb.size();
    sc.values.assign(sc.frames * sc.channels, 0.0);
    for (std::size_t i = 0; i < fb.size(); ++i) {
        std::vector<cplx> h(fb.responses[i]);
        fft_inverse(h);
        for (std::size_t t = 0; t < sc.frames; ++t) {
            const std::size_t out = left + t * hop;
            cplx acc = 0;
            for (std::size_t m = 0; m < n; ++m) acc += padded[m] * h[(out + n - m) % n];
            sc.values[t * sc.channels + i] = std::abs(acc);
        }
    }
    return sc;
}

void stability() {
    const RunConfig c;
    const double T = c.T;
    const std::size_t tau = static_cast<std::size_t>(T / 32 * kFs);
    auto am_tone = [&](std::size_t start) {
        std::vector<double> x(40000, 0.0);
        for (std::size_t n = start; n < x.size(); ++n) {
            const double t = static_cast<double>(n - start) / kFs;
            x[n] = std::sin(2 * std::numbers::pi * 600 * t) * (1 + 0.5 * std::sin(2 * std::numbers::pi * 6 * t));
        }
        return x;
    };
    const auto x1a = scalogram_of(am_tone(8000)), x1b = scalogram_of(am_tone(8000 + tau));
    const double d1 = th::rel_diff(average_time(x1b, T).values, average_time(x1a, T).values);
    const double d2 = th::rel_diff(average_scattering(run_scatter(c, x1b, TransformKind::Temporal), T).values,
                                   average_scattering(run_scatter(c, x1a, TransformKind::Temporal), T).values);

    const std::size_t n = 1024;
    const auto fb = renormalized(build_order1(16, 8, n, kFs), LowpassKernel{T});
    int expansive = 0;
    for (unsigned s = 0; s < 100; ++s) {
        const auto x = th::white(n, 2000 + 2 * s), y = th::white(n, 2001 + 2 * s);
        if (th::dist2(cqt(x, kFs, fb, 1).values, cqt(y, kFs, fb, 1).values) > th::dist2(x, y)) ++expansive;
    }

    double conv = 0;
    for (std::size_t len : {1000, 4096}) {
        const auto x = th::white(len, 21 + len);
        const auto bank = build_order1(16, 8, signal_grid_size(len), kFs);
        conv = std::max(conv, th::rel_diff(cqt(x, kFs, bank, 64).values, direct_cqt(x, bank, 64).values));
    }
    report(6, "stability", d1 <= 0.1 && d2 <= 0.1 && expansive == 0 && conv <= 1e-6,
           fmt("shift T/32: S1 %.4f, S2 %.4f; expansive pairs %d/100; FFT vs direct %.2e", d1, d2, expansive, conv));
}

void structural() {
    const RunConfig c;
    const auto x = th::white(8000, 8);
    const auto x1 = scalogram_of(x);
    const auto back = from_spiral(to_spiral(x1));
    const bool reshape = back.values == x1.values;

    const auto a = build_alpha_bank(x1.frames, x1.frame_rate, c.alpha_min);
    const auto b = make_beta_bank(c.Q, c.J, c.beta_resolutions);
    const auto g = make_gamma_bank(c.J, c.gamma_resolutions);
    const auto sp = to_spiral(x1);
    const auto ref = scatter_spiral(sp, a, b, g);
    std::array<Axis, 3> order{Axis::Time, Axis::Logfreq, Axis::Octave};
    std::sort(order.begin(), order.end());
    double worst_order = 0;
    do worst_order = std::max(worst_order, th::rel_diff(scatter_spiral(sp, a, b, g, order).values, ref.values));
    while (std::next_permutation(order.begin(), order.end()));

    auto scaled = x;
    for (auto& v : scaled) v *= 3.7;
    auto expect = ref.values;
    for (auto& v : expect) v *= 3.7;
    const double homog = th::rel_diff(scatter_spiral(to_spiral(scalogram_of(scaled)), a, b, g).values, expect);

    SourceFilterSpec s;
    s.source = {200, 2.0};
    s.filter = {1000, 0};
    s.envelope.flat = true;
    s.partials = 1;
    s.duration = 1.0;
    s.sample_rate = kFs;
    const auto up = synthesize(s).samples;
    auto argmax_beta = [&](const std::vector<double>& v) {
        const auto x2 = run_scatter(c, scalogram_of(v), TransformKind::Joint);
        const auto k = std::max_element(x2.values.begin(), x2.values.end()) - x2.values.begin();
        return x2.paths[static_cast<std::size_t>(k) / x2.frames].beta;
    };
    const double bu = argmax_beta(up), bd = argmax_beta(std::vector<double>(up.rbegin(), up.rend()));
    report(7, "structural", reshape && worst_order <= 1e-9 && homog <= 1e-12 && bu > 0 && bd < 0,
           fmt("reshape %s; axis orders %.2e; homogeneity %.2e; argmax beta %+.2f -> %+.2f reversed",
               reshape ? "bit-exact" : "differs", worst_order, homog, bu, bd));
}

void io_suite() {
    auto x = th::white(16000, 99);
    for (auto& v : x) v = std::clamp(v / 4, -1.0, 1.0);
    const auto wav = scratch("rt.wav").string();
    write_wav(wav, x, kFs);
    const auto w = read_wav(wav);
    double werr = 0;
    for (std::size_t k = 0; k < x.size(); ++k) werr = std::max(werr, std::abs(w.samples[k] - x[k]));
    const bool wav_ok = w.samples.size() == x.size() && werr <= std::ldexp(1.0, -15);

    Tensor t{{40, 25}, th::white(1000, 5), {}};
    const auto bin = scratch("rt.bin").string();
    write_matrix(t, MatrixFormat::Bin, bin);
    const auto r = read_matrix_bin(bin);
    const bool bin_ok = r.dims == t.dims && r.values.size() == t.values.size() &&
                        std::memcmp(r.values.data(), t.values.data(), t.values.size() * sizeof(double)) == 0;

    const auto spec = scratch("steady.json");
    std::ofstream(spec) << json{{"source", {{"initial_rate", 220}}}, {"filter", {{"initial_rate", 800}}},
                                {"partials", 4}, {"duration", 1.0}, {"sample_rate", kFs}}
                               .dump();
    bool cli_ok = true;
    for (const std::string args : {"scalogram --format csv", "scatter --kind spiral --averaged --format bin"}) {
        const auto o1 = scratch("cli1.out"), o2 = scratch("cli2.out");
        cli_ok = cli_ok && cli(args + " --synth " + spec.string() + " --output " + o1.string()) == 0 &&
                 cli(args + " --synth " + spec.string() + " --output " + o2.string()) == 0 &&
                 fs::file_size(o1) > 0 && slurp(o1) == slurp(o2);
    }
    report(8, "io", wav_ok && bin_ok && cli_ok,
           fmt("wav max error %.2e (limit %.2e); SPSC %s; CLI outputs %s", werr, std::ldexp(1.0, -15),
               bin_ok ? "bit-exact" : "differ", cli_ok ? "identical across runs" : "differ or failed"));
}

} // namespace

int main() {
    for (auto* f : {plane_equation, zero_velocity, harmonicity, spin, frame_quality, stability, structural, io_suite}) {
        try {
            f();
        } catch (const std::exception& e) {
            std::printf("FAIL (exception) %s\n", e.what());
            ++failures;
        }
    }
    return failures;
}
