#include "scattering.hpp"

#include "conv.hpp"
#include "errors.hpp"

#include <cmath>
#include <string>

namespace spiral {
namespace {

void check_alpha_bank(const Scalogram& sc, const Filterbank& bank_alpha) {
    require(bank_alpha.kind == BankKind::Order2Time, "alpha bank must be a temporal bank");
    require(bank_alpha.grid_size == time_grid_size(sc.frames),
            "alpha bank grid does not match the scalogram frame count");
    require(std::abs(bank_alpha.sample_rate - sc.frame_rate) <= 1e-9 * sc.frame_rate,
            "alpha bank rate does not match the scalogram frame rate");
}

bool keep(double alpha, double lambda1, int Q) { return alpha < lambda1 / Q; }

ScatteringCoefficients empty_like(const Scalogram& sc, TransformKind kind) {
    ScatteringCoefficients c;
    c.frames = sc.frames;
    c.frame_rate = sc.frame_rate;
    c.kind = kind;
    c.lambda1 = sc.lambda1;
    c.Q = sc.Q;
    return c;
}

} // namespace

Filterbank build_alpha_bank(std::size_t frames, double frame_rate, double alpha_min) {
    return build_order2_time(time_grid_size(frames), frame_rate, alpha_min);
}

ScatteringCoefficients scatter_temporal(const Scalogram& sc, const Filterbank& bank_alpha) {
    check_alpha_bank(sc, bank_alpha);
    auto out = empty_like(sc, TransformKind::Temporal);
    const std::size_t T = sc.frames, L = sc.channels;
    const std::size_t grid = bank_alpha.grid_size;
    const std::size_t left = (grid - T) / 2;
    std::vector<cplx> spec(grid), buf(grid);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t k = 0; k < grid; ++k)
            spec[k] = sc.values[reflect_index(static_cast<long long>(k) - static_cast<long long>(left), T) * L + i];
        fft_forward(spec);
        for (std::size_t a = 0; a < bank_alpha.size(); ++a) {
            if (!keep(bank_alpha.centers[a], sc.lambda1[i], sc.Q)) continue;
            for (std::size_t k = 0; k < grid; ++k) buf[k] = spec[k] * bank_alpha.responses[a][k];
            fft_inverse(buf);
            out.paths.push_back({i, bank_alpha.centers[a], 0.0, 0.0});
            for (std::size_t t = 0; t < T; ++t) out.values.push_back(std::abs(buf[left + t]));
        }
    }
    return out;
}

ScatteringCoefficients scatter_joint(const Scalogram& sc, const Filterbank& bank_alpha,
                                     const Filterbank& bank_beta) {
    check_alpha_bank(sc, bank_alpha);
    require(bank_beta.kind == BankKind::ModulationLogfreq, "beta bank must be a log-frequency bank");
    require(bank_beta.grid_size >= sc.channels, "beta bank grid shorter than the frequency axis");
    auto out = empty_like(sc, TransformKind::Joint);
    const std::size_t T = sc.frames, L = sc.channels;
    const std::size_t nA = bank_alpha.size(), nB = bank_beta.size();

    // slot[i][a][b] -> path row
    std::vector<long long> slot(L * nA * nB, -1);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t a = 0; a < nA; ++a) {
            if (!keep(bank_alpha.centers[a], sc.lambda1[i], sc.Q)) continue;
            for (std::size_t b = 0; b < nB; ++b) {
                slot[(i * nA + a) * nB + b] = static_cast<long long>(out.paths.size());
                out.paths.push_back({i, bank_alpha.centers[a], bank_beta.centers[b], 0.0});
            }
        }
    out.values.assign(out.paths.size() * T, 0.0);

    const std::vector<cplx> base(sc.values.begin(), sc.values.end());
    for (std::size_t a = 0; a < nA; ++a) {
        auto ya = base;
        convolve_lines_reflect(ya, column_lines(T, L), bank_alpha.responses[a]);
        for (std::size_t b = 0; b < nB; ++b) {
            auto yb = ya;
            convolve_lines_zero(yb, row_lines(T, L), bank_beta.responses[b]);
            for (std::size_t i = 0; i < L; ++i) {
                const long long p = slot[(i * nA + a) * nB + b];
                if (p < 0) continue;
                for (std::size_t t = 0; t < T; ++t)
                    out.values[static_cast<std::size_t>(p) * T + t] = std::abs(yb[t * L + i]);
            }
        }
    }
    return out;
}

ScatteringCoefficients scatter_spiral(const SpiralTensor& sp, const Filterbank& bank_alpha,
                                      const Filterbank& bank_beta, const Filterbank& bank_gamma,
                                      std::array<Axis, 3> order) {
    const Scalogram sc = from_spiral(sp);
    check_alpha_bank(sc, bank_alpha);
    require(bank_beta.kind == BankKind::ModulationLogfreq, "beta bank must be a log-frequency bank");
    require(bank_gamma.kind == BankKind::ModulationOctave, "gamma bank must be an octave bank");
    require(bank_gamma.grid_size >= static_cast<std::size_t>(sp.J),
            "gamma bank grid shorter than the octave axis");
    // β and γ both act on the log-frequency index; they commute only as circular
    // convolutions on one common zero-padded index range, cropped once at the end
    require(bank_beta.grid_size == static_cast<std::size_t>(sp.Q) * bank_gamma.grid_size,
            "beta bank grid must be Q times the gamma bank grid");
    require(bank_beta.grid_size >= sc.channels, "beta bank grid shorter than the frequency axis");
    {
        bool seen[3] = {false, false, false};
        for (Axis ax : order) seen[static_cast<int>(ax)] = true;
        require(seen[0] && seen[1] && seen[2], "axis order must list each axis once");
    }
    auto out = empty_like(sc, TransformKind::Spiral);
    const std::size_t T = sc.frames, L = sc.channels;
    const std::size_t nA = bank_alpha.size(), nB = bank_beta.size(), nG = bank_gamma.size();
    const std::size_t Q = static_cast<std::size_t>(sp.Q);

    std::vector<long long> slot(L * nA * nB * nG, -1);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t a = 0; a < nA; ++a) {
            if (!keep(bank_alpha.centers[a], sc.lambda1[i], sc.Q)) continue;
            for (std::size_t b = 0; b < nB; ++b)
                for (std::size_t g = 0; g < nG; ++g) {
                    slot[((i * nA + a) * nB + b) * nG + g] = static_cast<long long>(out.paths.size());
                    out.paths.push_back({i, bank_alpha.centers[a], bank_beta.centers[b],
                                         bank_gamma.centers[g]});
                }
        }
    out.values.assign(out.paths.size() * T, 0.0);

    // working rows of W = 2QJ log-frequency bins, the upper half being padding
    const std::size_t W = bank_beta.grid_size;
    // octave lines: fixed (frame, chroma), stride Q through the padded index
    LineSet octave_lines;
    octave_lines.length = bank_gamma.grid_size;
    octave_lines.stride = Q;
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < Q; ++c) octave_lines.starts.push_back(t * W + c);
    const LineSet time_lines = column_lines(T, W);
    const LineSet freq_lines = row_lines(T, W);

    auto apply = [&](Axis ax, std::vector<cplx>& d, std::size_t a, std::size_t b, std::size_t g) {
        switch (ax) {
        case Axis::Time: convolve_lines_reflect(d, time_lines, bank_alpha.responses[a]); break;
        case Axis::Logfreq: convolve_lines_zero(d, freq_lines, bank_beta.responses[b]); break;
        case Axis::Octave: convolve_lines_zero(d, octave_lines, bank_gamma.responses[g]); break;
        }
    };
    auto count = [&](Axis ax) { return ax == Axis::Time ? nA : ax == Axis::Logfreq ? nB : nG; };

    std::vector<cplx> base(T * W, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < L; ++i) base[t * W + i] = sc.values[t * L + i];
    std::size_t idx[3];
    const std::size_t n0 = count(order[0]), n1 = count(order[1]), n2 = count(order[2]);
    for (std::size_t u0 = 0; u0 < n0; ++u0) {
        idx[static_cast<int>(order[0])] = u0;
        auto y0 = base;
        apply(order[0], y0, idx[0], idx[1], idx[2]);
        for (std::size_t u1 = 0; u1 < n1; ++u1) {
            idx[static_cast<int>(order[1])] = u1;
            auto y1 = y0;
            apply(order[1], y1, idx[0], idx[1], idx[2]);
            for (std::size_t u2 = 0; u2 < n2; ++u2) {
                idx[static_cast<int>(order[2])] = u2;
                auto y2 = y1;
                apply(order[2], y2, idx[0], idx[1], idx[2]);
                const std::size_t a = idx[0], b = idx[1], g = idx[2];
                for (std::size_t i = 0; i < L; ++i) {
                    const long long p = slot[((i * nA + a) * nB + b) * nG + g];
                    if (p < 0) continue;
                    for (std::size_t t = 0; t < T; ++t)
                        out.values[static_cast<std::size_t>(p) * T + t] = std::abs(y2[t * W + i]);
                }
            }
        }
    }
    return out;
}

ScatteringCoefficients average_scattering(const ScatteringCoefficients& x2, double T) {
    require(T > 0, "averaging support T must be positive");
    require(T >= 2.0 / x2.frame_rate, "averaging support T too small for the frame rate");
    const std::size_t grid = time_grid_size(x2.frames);
    const auto omega = fft_frequencies(grid, x2.frame_rate);
    std::vector<cplx> resp(grid);
    for (std::size_t k = 0; k < grid; ++k) resp[k] = gaussian_lowpass_at(T, omega[k]);
    std::vector<cplx> data(x2.values.begin(), x2.values.end());
    // each path is a contiguous row of `frames` samples
    LineSet lines;
    lines.length = x2.frames;
    lines.stride = 1;
    for (std::size_t p = 0; p < x2.paths.size(); ++p) lines.starts.push_back(p * x2.frames);
    convolve_lines_reflect(data, lines, resp);
    auto out = x2;
    for (std::size_t k = 0; k < data.size(); ++k) out.values[k] = std::abs(data[k]);
    out.averaged = true;
    return out;
}

const char* to_string(TransformKind k) {
    switch (k) {
    case TransformKind::Temporal: return "temporal";
    case TransformKind::Joint: return "joint";
    case TransformKind::Spiral: return "spiral";
    }
    return "temporal";
}

TransformKind transform_kind_from_string(const std::string& s) {
    if (s == "temporal") return TransformKind::Temporal;
    if (s == "joint") return TransformKind::Joint;
    if (s == "spiral") return TransformKind::Spiral;
    throw ParameterError("unknown transform kind '" + s + "'");
}

} // namespace spiral
