#include "scalogram.hpp"

#include "conv.hpp"
#include "errors.hpp"

#include <cmath>

namespace spiral {

std::size_t signal_grid_size(std::size_t len) { return time_grid_size(len); }

Scalogram cqt(const std::vector<double>& signal, double sample_rate, const Filterbank& fb,
              std::size_t hop) {
    require(fb.kind == BankKind::Order1, "cqt needs a first-order filterbank");
    require(sample_rate == fb.sample_rate, "signal sample rate differs from the filterbank's");
    require(!signal.empty(), "empty signal");
    const std::size_t n = fb.grid_size;
    const std::size_t len = signal.size();
    require(len <= n, "signal longer than the filterbank grid");
    require(is_power_of_two(hop), "hop must be a power of two");
    require(hop <= n / (2 * static_cast<std::size_t>(fb.J)), "hop too large for this grid");

    const std::size_t left = (n - len) / 2;
    std::vector<cplx> spec(n);
    for (std::size_t k = 0; k < n; ++k)
        spec[k] = signal[reflect_index(static_cast<long long>(k) - static_cast<long long>(left), len)];
    fft_forward(spec);

    Scalogram sc;
    sc.sample_rate = sample_rate;
    sc.hop = hop;
    sc.frame_rate = sample_rate / static_cast<double>(hop);
    sc.frames = (len + hop - 1) / hop;
    sc.channels = fb.size();
    sc.lambda1 = fb.centers;
    sc.Q = fb.Q;
    sc.J = fb.J;
    sc.values.assign(sc.frames * sc.channels, 0.0);

    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < sc.channels; ++i) {
        const auto& r = fb.responses[i];
        for (std::size_t k = 0; k < n; ++k) buf[k] = spec[k] * r[k];
        fft_inverse(buf);
        for (std::size_t t = 0; t < sc.frames; ++t)
            sc.values[t * sc.channels + i] = std::abs(buf[left + t * hop]);
    }
    return sc;
}

Scalogram average_time(const Scalogram& sc, double T, bool decimate) {
    require(T > 0, "averaging support T must be positive");
    require(T >= 2.0 / sc.frame_rate, "averaging support T too small for the frame rate");
    const std::size_t grid = time_grid_size(sc.frames);
    const auto omega = fft_frequencies(grid, sc.frame_rate);
    std::vector<cplx> resp(grid);
    for (std::size_t k = 0; k < grid; ++k) resp[k] = gaussian_lowpass_at(T, omega[k]);

    std::vector<cplx> data(sc.values.begin(), sc.values.end());
    convolve_lines_reflect(data, column_lines(sc.frames, sc.channels), resp);

    std::size_t d = 1;
    if (decimate)
        while (sc.frame_rate / static_cast<double>(2 * d) >= 2.0 / T && 2 * d <= sc.frames) d *= 2;

    Scalogram out = sc;
    out.hop = sc.hop * d;
    out.frame_rate = sc.frame_rate / static_cast<double>(d);
    out.frames = (sc.frames + d - 1) / d;
    out.values.assign(out.frames * out.channels, 0.0);
    for (std::size_t t = 0; t < out.frames; ++t)
        for (std::size_t i = 0; i < sc.channels; ++i)
            out.values[t * sc.channels + i] = std::abs(data[t * d * sc.channels + i]);
    return out;
}

SpiralTensor to_spiral(const Scalogram& sc) {
    require(sc.channels == static_cast<std::size_t>(sc.Q) * sc.J,
            "log-frequency grid is not Q x J rectangular");
    SpiralTensor sp;
    sp.frames = sc.frames;
    sp.Q = sc.Q;
    sp.J = sc.J;
    sp.sample_rate = sc.sample_rate;
    sp.hop = sc.hop;
    sp.frame_rate = sc.frame_rate;
    sp.lambda1 = sc.lambda1;
    sp.values.resize(sc.values.size());
    for (std::size_t n = 0; n < sc.frames; ++n)
        for (int j = 0; j < sc.J; ++j)
            for (int c = 0; c < sc.Q; ++c)
                sp.values[(n * sc.Q + c) * sc.J + j] = sc.values[n * sc.channels + j * sc.Q + c];
    return sp;
}

Scalogram from_spiral(const SpiralTensor& sp) {
    Scalogram sc;
    sc.frames = sp.frames;
    sc.channels = static_cast<std::size_t>(sp.Q) * sp.J;
    sc.Q = sp.Q;
    sc.J = sp.J;
    sc.sample_rate = sp.sample_rate;
    sc.hop = sp.hop;
    sc.frame_rate = sp.frame_rate;
    sc.lambda1 = sp.lambda1;
    sc.values.resize(sp.values.size());
    for (std::size_t n = 0; n < sp.frames; ++n)
        for (int j = 0; j < sp.J; ++j)
            for (int c = 0; c < sp.Q; ++c)
                sc.values[n * sc.channels + j * sp.Q + c] = sp.values[(n * sp.Q + c) * sp.J + j];
    return sc;
}

} // namespace spiral
