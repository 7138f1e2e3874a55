#include "helpers.hpp"
#include "conv.hpp"
#include "errors.hpp"
#include "scalogram.hpp"

#include <doctest.h>

using namespace spiral;

namespace {

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

} // namespace

TEST_CASE("reflect index follows numpy reflect padding") {
    // [a b c d] padded by 3 on both sides: d c b | a b c d | c b a
    const std::vector<long long> in{-3, -2, -1, 0, 1, 2, 3, 4, 5, 6};
    const std::vector<std::size_t> out{3, 2, 1, 0, 1, 2, 3, 2, 1, 0};
    for (std::size_t k = 0; k < in.size(); ++k) CHECK(reflect_index(in[k], 4) == out[k]);
    CHECK(reflect_index(17, 1) == 0);
    CHECK(time_grid_size(1000) == 2048);
    CHECK(time_grid_size(1024) == 2048);
}

TEST_CASE("zero signal gives a zero scalogram") {
    const std::vector<double> x(4000, 0.0);
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), 16000);
    const auto sc = cqt(x, 16000, fb, 128);
    CHECK(sc.frames == 32);
    CHECK(sc.channels == 128);
    CHECK(th::max_abs(sc.values) == 0.0);
}

TEST_CASE("a 440 Hz sine peaks at the nearest channel") {
    const double fs = 16000;
    const auto x = th::sine(440, 0.5, fs);
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), fs);
    const auto sc = cqt(x, fs, fb, 128);

    // DFT peak of the signal itself, zero-padded for resolution
    std::vector<cplx> X(1 << 16);
    std::copy(x.begin(), x.end(), X.begin());
    fft_forward(X);
    std::size_t kmax = 1;
    for (std::size_t k = 1; k < X.size() / 2; ++k)
        if (std::abs(X[k]) > std::abs(X[kmax])) kmax = k;
    const double f_peak = static_cast<double>(kmax) * fs / static_cast<double>(X.size());
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < fb.size(); ++i)
        if (std::abs(std::log(fb.centers[i] / f_peak)) < std::abs(std::log(fb.centers[nearest] / f_peak)))
            nearest = i;

    std::vector<double> mean(sc.channels, 0.0);
    for (std::size_t t = 0; t < sc.frames; ++t)
        for (std::size_t i = 0; i < sc.channels; ++i) mean[i] += sc.at(t, i);
    const auto best = std::max_element(mean.begin(), mean.end()) - mean.begin();
    CHECK(static_cast<std::size_t>(best) == nearest);
}

TEST_CASE("scalogram is 1-homogeneous") {
    const auto x = th::white(3000, 11);
    std::vector<double> x2(x);
    for (auto& v : x2) v *= 2;
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), 16000);
    const auto a = cqt(x, 16000, fb, 64), b = cqt(x2, 16000, fb, 64);
    double err = 0;
    for (std::size_t k = 0; k < a.values.size(); ++k) err = std::max(err, std::abs(b.values[k] - 2 * a.values[k]));
    CHECK(err <= 1e-12 * th::max_abs(b.values));
    for (double v : a.values) CHECK(v >= 0.0);
}

TEST_CASE("circular shift covariance when the signal fills the grid") {
    const std::size_t n = 4096, hop = 4, shift = 64;
    const auto x = th::white(n, 5);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[(k + shift) % n] = x[k];
    const auto fb = build_order1(16, 8, n, 16000);
    const auto a = cqt(x, 16000, fb, hop), b = cqt(y, 16000, fb, hop);
    std::vector<double> rolled(a.values.size());
    const std::size_t fshift = shift / hop;
    for (std::size_t t = 0; t < a.frames; ++t)
        for (std::size_t i = 0; i < a.channels; ++i)
            rolled[((t + fshift) % a.frames) * a.channels + i] = a.at(t, i);
    CHECK(th::rel_diff(b.values, rolled) <= 1e-9);
}

TEST_CASE("renormalized scalogram is non-expansive") {
    const std::size_t n = 1024;
    const auto fb = renormalized(build_order1(16, 8, n, 16000), LowpassKernel{0.37});
    for (unsigned s = 0; s < 20; ++s) {
        const auto x = th::white(n, 100 + 2 * s), y = th::white(n, 101 + 2 * s);
        const auto a = cqt(x, 16000, fb, 1), b = cqt(y, 16000, fb, 1);
        CHECK(th::dist2(a.values, b.values) <= th::dist2(x, y));
    }
}

TEST_CASE("FFT convolution matches direct convolution") {
    const auto x = th::white(1000, 21);
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), 16000);
    const auto fast = cqt(x, 16000, fb, 8);
    const auto slow = direct_cqt(x, fb, 8);
    CHECK(th::rel_diff(fast.values, slow.values) <= 1e-6);
}

TEST_CASE("cqt preconditions") {
    const auto x = th::white(1000, 1);
    const auto fb = build_order1(16, 8, 2048, 16000);
    CHECK_THROWS_AS(cqt(x, 8000, fb, 128), ParameterError);
    CHECK_THROWS_AS(cqt(x, 16000, fb, 100), ParameterError);
    CHECK_THROWS_AS(cqt(x, 16000, fb, 256), ParameterError);  // above grid / (2J)
    CHECK_THROWS_AS(cqt(th::white(3000, 1), 16000, fb, 128), ParameterError);
    const auto sc = cqt(x, 16000, fb, 128);
    CHECK(sc.frame_rate == 125.0);
    CHECK(sc.frames == 8);
}

TEST_CASE("time averaging keeps constants") {
    Scalogram sc;
    sc.frames = 300;
    sc.channels = 3;
    sc.frame_rate = 125;
    sc.Q = 1;
    sc.J = 3;
    sc.values.assign(sc.frames * sc.channels, 0.0);
    for (std::size_t t = 0; t < sc.frames; ++t)
        for (std::size_t i = 0; i < 3; ++i) sc.values[t * 3 + i] = 1.0 + static_cast<double>(i);
    const auto s = average_time(sc, 0.37);
    for (std::size_t k = 0; k < s.values.size(); ++k) CHECK(th::near_rel(s.values[k], sc.values[k], 1e-12));
    CHECK_THROWS_AS(average_time(sc, 0.01), ParameterError);
    CHECK_THROWS_AS(average_time(sc, 0.0), ParameterError);
}

TEST_CASE("averaging an impulse gives a Gaussian of width proportional to T") {
    auto spread = [](double T) {
        Scalogram sc;
        sc.frames = 2001;
        sc.channels = 1;
        sc.frame_rate = 125;
        sc.values.assign(sc.frames, 0.0);
        sc.values[1000] = 1.0;
        const auto s = average_time(sc, T);
        double m0 = 0, m2 = 0;
        for (std::size_t t = 0; t < s.frames; ++t) {
            const double u = (static_cast<double>(t) - 1000) / 125;
            m0 += s.values[t];
            m2 += s.values[t] * u * u;
        }
        CHECK(th::near_rel(m0, 1.0, 1e-9));
        return std::sqrt(m2 / m0);
    };
    // 2^-(fT)^2 = exp(-2 pi^2 sigma^2 f^2) with sigma = T sqrt(ln2 / 2) / pi
    for (double T : {0.1, 0.37, 1.0}) {
        CAPTURE(T);
        CHECK(spread(T) == doctest::Approx(T * std::sqrt(std::log(2.0) / 2) / std::numbers::pi).epsilon(1e-3));
    }
}

TEST_CASE("decimated averaging keeps at least 2/T frames per second") {
    const auto x = th::white(16000, 3);
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), 16000);
    const auto sc = cqt(x, 16000, fb, 128);
    const auto s = average_time(sc, 0.37, true);
    CHECK(s.frame_rate >= 2 / 0.37);
    CHECK(s.frame_rate / 2 < 2 / 0.37);
    CHECK(s.frames == (sc.frames + 15) / 16);
    const auto full = average_time(sc, 0.37);
    for (std::size_t t = 0; t < s.frames; ++t)
        for (std::size_t i = 0; i < s.channels; ++i) CHECK(s.at(t, i) == full.at(t * 16, i));
}

TEST_CASE("a small onset shift barely moves the averaged scalogram") {
    const double fs = 16000, T = 0.37;
    const std::size_t len = 32000, onset = 12000, tau = static_cast<std::size_t>(T / 32 * fs);
    auto tone = [&](std::size_t start) {
        std::vector<double> x(len, 0.0);
        for (std::size_t n = start; n < len; ++n) x[n] = std::sin(2 * std::numbers::pi * 440 * (n - start) / fs);
        return x;
    };
    const auto fb = build_order1(16, 8, signal_grid_size(len), fs);
    const auto a = average_time(cqt(tone(onset), fs, fb, 128), T);
    const auto b = average_time(cqt(tone(onset + tau), fs, fb, 128), T);
    CHECK(th::rel_diff(b.values, a.values) <= 0.1);
}

TEST_CASE("spiral reshape") {
    const auto x = th::white(4000, 8);
    const auto fb = build_order1(16, 8, signal_grid_size(x.size()), 16000);
    const auto sc = cqt(x, 16000, fb, 128);
    const auto sp = to_spiral(sc);
    CHECK(sp.Q == 16);
    CHECK(sp.J == 8);
    CHECK(sp.values.size() == sc.frames * 16 * 8);
    for (std::size_t t = 0; t < sc.frames; ++t)
        for (int j = 0; j < 8; ++j)
            for (int c = 0; c < 16; ++c) CHECK(sp.at(t, c, j) == sc.at(t, static_cast<std::size_t>(j * 16 + c)));
    const auto back = from_spiral(sp);
    CHECK(back.values == sc.values);
    CHECK(back.lambda1 == sc.lambda1);
    CHECK(back.frame_rate == sc.frame_rate);

    Scalogram bad = sc;
    bad.channels = 100;
    CHECK_THROWS_AS(to_spiral(bad), ParameterError);
}

TEST_CASE("octave-spaced energy stays in one chroma slice") {
    Scalogram sc;
    sc.frames = 4;
    sc.Q = 16;
    sc.J = 8;
    sc.channels = 128;
    sc.values.assign(sc.frames * sc.channels, 0.0);
    for (std::size_t t = 0; t < 4; ++t)
        for (int j = 0; j < 8; ++j) sc.values[t * 128 + static_cast<std::size_t>(j) * 16] = 1.0 + j;
    const auto sp = to_spiral(sc);
    for (std::size_t t = 0; t < 4; ++t)
        for (int c = 0; c < 16; ++c)
            for (int j = 0; j < 8; ++j) CHECK((sp.at(t, c, j) != 0.0) == (c == 0));

    // the same from a signal: octave-spaced partials on chroma-0 centers
    const double fs = 16000;
    const auto fb = build_order1(16, 8, signal_grid_size(16000), fs);
    std::vector<double> x(16000, 0.0);
    for (int j = 1; j < 7; ++j) {
        const double f = fb.centers[static_cast<std::size_t>(j) * 16];
        for (std::size_t n = 0; n < x.size(); ++n) x[n] += std::sin(2 * std::numbers::pi * f * n / fs);
    }
    const auto s = to_spiral(cqt(x, fs, fb, 128));
    const std::size_t t = s.frames / 2;
    for (int j = 1; j < 7; ++j) {
        int best = 0;
        for (int c = 1; c < 16; ++c)
            if (s.at(t, c, j) > s.at(t, best, j)) best = c;
        CHECK(best == 0);
    }
}
