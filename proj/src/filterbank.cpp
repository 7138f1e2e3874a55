#include "filterbank.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spiral {

double order1_center(int Q, int J, double fmax, std::size_t index) {
    const double top = static_cast<double>(Q) * J - 1;
    return fmax * std::exp2((static_cast<double>(index) - top) / Q);
}

Filterbank build_order1(int Q, int J, std::size_t grid_size, double sample_rate,
                        double fmax_ratio) {
    require(Q >= 1, "Q must be at least 1");
    require(J >= 1, "J must be at least 1");
    require(is_power_of_two(grid_size), "grid size must be a power of two");
    require(sample_rate > 0, "sample rate must be positive");
    require(fmax_ratio > 0 && fmax_ratio < 0.5,
            "top filter center must lie below the Nyquist frequency");
    Filterbank fb;
    fb.kind = BankKind::Order1;
    fb.Q = Q;
    fb.J = J;
    fb.grid_size = grid_size;
    fb.sample_rate = sample_rate;
    const double fmax = fmax_ratio * sample_rate;
    fb.fmax = fmax;
    const auto omega = fft_frequencies(grid_size, sample_rate);
    const std::size_t n = static_cast<std::size_t>(Q) * J;
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = order1_center(Q, J, fmax, i);
        fb.centers.push_back(lam);
        fb.responses.push_back(gammatone_response(lam, Q, kGammatoneOrder, omega));
    }
    return fb;
}

Filterbank build_order2_time(std::size_t grid_size, double frame_rate, double alpha_min) {
    require(grid_size >= 2, "grid size too small");
    require(frame_rate > 0, "frame rate must be positive");
    require(alpha_min > 0, "alpha_min must be positive");
    require(alpha_min < frame_rate / 2, "alpha_min must lie below the frame-rate Nyquist");
    Filterbank fb;
    fb.kind = BankKind::Order2Time;
    fb.Q = 1;
    fb.J = 0;
    fb.grid_size = grid_size;
    fb.sample_rate = frame_rate;
    const auto omega = fft_frequencies(grid_size, frame_rate);
    for (double a = alpha_min; a < frame_rate / 2; a *= 2) {
        fb.centers.push_back(a);
        fb.responses.push_back(gammatone_response(a, 1.0, kGammatoneOrder, omega));
        ++fb.J;
    }
    if (fb.centers.empty()) throw ParameterError("empty temporal second-order bank");
    return fb;
}

void null_low_moments(std::vector<cplx>& response) {
    const std::size_t n = response.size();
    if (n < 4) return;
    std::vector<cplx> h = response;
    fft_inverse(h);
    const double s = static_cast<double>(n) / 8;
    std::vector<double> idx(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        double m = static_cast<double>(k);
        if (k >= (n + 1) / 2) m -= static_cast<double>(n);
        idx[k] = m;
        // drop the unpaired Nyquist sample to keep the window exactly symmetric
        w[k] = (n % 2 == 0 && k == n / 2) ? 0.0 : std::exp(-m * m / (2 * s * s));
    }
    cplx m0 = 0, m1 = 0;
    double w0 = 0, w2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        m0 += h[k];
        m1 += idx[k] * h[k];
        w0 += w[k];
        w2 += idx[k] * idx[k] * w[k];
    }
    for (std::size_t k = 0; k < n; ++k) h[k] -= (m0 / w0) * w[k] + (m1 / w2) * idx[k] * w[k];
    fft_forward(h);
    response = h;
}

Filterbank build_modulation_bank(ModAxis axis, const std::vector<double>& resolutions,
                                 std::size_t grid_size, double axis_rate, bool include_zero) {
    require(!resolutions.empty(), "modulation bank needs at least one resolution");
    require(axis_rate > 0, "axis rate must be positive");
    require(grid_size >= 2, "grid size too small");
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        require(resolutions[i] > 0, "modulation resolutions must be positive");
        require(i == 0 || resolutions[i] > resolutions[i - 1],
                "modulation resolutions must be strictly ascending");
        require(resolutions[i] <= axis_rate / 2, "modulation resolution above the axis Nyquist");
    }
    Filterbank fb;
    fb.kind = axis == ModAxis::Logfreq ? BankKind::ModulationLogfreq : BankKind::ModulationOctave;
    fb.Q = 1;
    fb.J = 0;
    fb.grid_size = grid_size;
    fb.sample_rate = axis_rate;

    std::vector<std::vector<cplx>> positive;
    for (double r : resolutions) {
        WaveletKernel k;
        k.family = axis == ModAxis::Logfreq ? WaveletFamily::Morlet : WaveletFamily::Gammatone;
        k.center_frequency = r;
        k.quality = 1.0;
        k.order = kGammatoneOrder;
        auto resp = sample_kernel(k, grid_size, axis_rate);
        if (axis == ModAxis::Logfreq) null_low_moments(resp);
        positive.push_back(std::move(resp));
    }
    // label -r carries the filter peaking at +r; label +r its exact mirror
    for (std::size_t i = resolutions.size(); i-- > 0;) {
        fb.centers.push_back(-resolutions[i]);
        fb.responses.push_back(positive[i]);
    }
    if (include_zero) {
        const auto omega = fft_frequencies(grid_size, axis_rate);
        std::vector<cplx> lp(grid_size);
        for (std::size_t k = 0; k < grid_size; ++k)
            lp[k] = gaussian_lowpass_at(1.0 / resolutions.front(), omega[k]);
        fb.centers.push_back(0.0);
        fb.responses.push_back(std::move(lp));
    }
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        fb.centers.push_back(resolutions[i]);
        fb.responses.push_back(mirror_response(positive[i]));
    }
    return fb;
}

namespace {

struct LpParts {
    std::vector<double> wavelets;  // Σ (|ψ̂(ω)|² + |ψ̂(-ω)|²) / 2
    std::vector<double> lowpass;   // |φ̂(ω)|²
};

LpParts lp_parts(const Filterbank& fb, const LowpassKernel& lowpass) {
    const std::size_t n = fb.grid_size;
    const auto omega = fft_frequencies(n, fb.sample_rate);
    LpParts p;
    p.wavelets.assign(n, 0.0);
    p.lowpass.assign(n, 0.0);
    for (const auto& r : fb.responses)
        for (std::size_t k = 0; k < n; ++k)
            p.wavelets[k] += 0.5 * (std::norm(r[k]) + std::norm(r[(n - k) % n]));
    for (std::size_t k = 0; k < n; ++k) {
        const double v = gaussian_lowpass_at(lowpass.support, omega[k]);
        p.lowpass[k] = v * v;
    }
    return p;
}

// Largest power gain g² on the wavelets keeping g²·W + Φ <= 1 at every bin.
double wavelet_gain(const LpParts& p) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < p.wavelets.size(); ++k)
        if (p.wavelets[k] > 0) g = std::min(g, std::max(0.0, 1.0 - p.lowpass[k]) / p.wavelets[k]);
    return std::isfinite(g) ? g : 1.0;
}

} // namespace

FrameDiagnostics littlewood_paley(const Filterbank& fb, const LowpassKernel& lowpass) {
    require(fb.kind == BankKind::Order1, "Littlewood-Paley diagnostics need a first-order bank");
    require(!fb.centers.empty(), "empty filterbank");
    const auto p = lp_parts(fb, lowpass);
    const double g = wavelet_gain(p);
    const auto omega = fft_frequencies(fb.grid_size, fb.sample_rate);
    FrameDiagnostics d;
    d.scale = g;
    d.band_lo = order1_center(fb.Q, fb.J, fb.fmax, 0);
    d.band_hi = fb.fmax;
    double a = std::numeric_limits<double>::infinity(), b = 0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double s = g * p.wavelets[k] + p.lowpass[k];
        b = std::max(b, s);
        if (omega[k] >= d.band_lo && omega[k] <= d.band_hi) a = std::min(a, s);
    }
    d.upper_bound = b;
    d.lower_bound = std::isfinite(a) ? a : 0.0;
    return d;
}

Filterbank renormalized(const Filterbank& fb, const LowpassKernel& lowpass) {
    const double g = std::sqrt(wavelet_gain(lp_parts(fb, lowpass)));
    Filterbank out = fb;
    for (auto& r : out.responses)
        for (auto& v : r) v *= g;
    return out;
}

} // namespace spiral
