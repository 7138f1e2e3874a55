#include "wavelets.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace spiral {
namespace {

struct GtRatio {
    double b, c;
    int n;
    // power response relative to the peak at w = 1
    double operator()(double w) const {
        const double den = (b * b + (w - c) * (w - c)) / (b * b + (1 - c) * (1 - c));
        return w * w / std::pow(den, n);
    }
};

GtRatio make_ratio(double b, int n) {
    const double d = (n - std::sqrt(double(n) * n - 4 * b * b)) / 2;
    return {b, 1 - d, n};
}

double crossing(const GtRatio& r, double lo, double hi, bool rising) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool above = r(mid) >= 0.5;
        if (above == rising) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double width_for(double b, int n) {
    const auto r = make_ratio(b, n);
    const double lo = crossing(r, 0.0, 1.0, true);
    double top = 2.0;
    while (r(top) >= 0.5) top *= 2;
    const double hi = crossing(r, 1.0, top, false);
    return hi - lo;
}

} // namespace

namespace {

GammatoneShape solve_gammatone(double Q, int order) {
    const double target = 1.0 / Q;
    double lo = 1e-12, hi = order / 2.0;
    require(width_for(hi, order) >= target,
            "quality factor too small for the gammatone of this order");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (width_for(mid, order) < target) lo = mid; else hi = mid;
    }
    const double b = 0.5 * (lo + hi);
    const auto r = make_ratio(b, order);
    GammatoneShape s;
    s.b = b;
    s.c = r.c;
    s.norm = std::pow(std::abs(cplx(b, 1 - r.c)), order);
    return s;
}

} // namespace

GammatoneShape gammatone_shape(double Q, int order) {
    require(order >= 2, "gammatone order must be at least 2");
    require(Q > 0 && std::isfinite(Q), "quality factor must be positive");
    static std::mutex mu;
    static std::map<std::pair<double, int>, GammatoneShape> cache;
    std::lock_guard lock(mu);
    const auto key = std::make_pair(Q, order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, solve_gammatone(Q, order)).first;
    return it->second;
}

cplx gammatone_eval(const GammatoneShape& s, int order, double w) {
    if (w <= 0) return 0.0;
    // i w / (b + i(w - c))^n, scaled so the value at w = 1 is exactly 1
    const cplx ratio = cplx(s.b, 1 - s.c) / cplx(s.b, w - s.c);
    cplx acc = 1.0;
    for (int k = 0; k < order; ++k) acc *= ratio;
    return w * acc;
}

namespace {

// Zero-mean Morlet in units of the center frequency: g(w - mu) - kappa g(w).
// The correction pushes the peak above mu and narrows the band for small Q, so
// mu and sigma are solved for a peak exactly at w = 1 with half-power width 1/Q.
struct MorletShape {
    double mu = 1, sigma = 1, kappa = 0, norm = 1;
    double raw(double w) const {
        auto g = [&](double u) { return std::exp(-u * u / (2 * sigma * sigma)); };
        return g(w - mu) - kappa * g(w);
    }
};

MorletShape make_shape(double mu, double sigma) {
    MorletShape m;
    m.mu = mu;
    m.sigma = sigma;
    m.kappa = std::exp(-mu * mu / (2 * sigma * sigma));
    return m;
}

double peak_location(const MorletShape& m) {
    double a = 0, b = m.mu + 4 * m.sigma;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 120; ++it) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (m.raw(c) > m.raw(d)) b = d; else a = c;
    }
    return 0.5 * (a + b);
}

// half-power width around a peak at w = 1
double half_width(const MorletShape& m) {
    const double half = 0.5 * m.raw(1.0) * m.raw(1.0);
    auto cross = [&](double in, double out) {
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (in + out);
            if (m.raw(mid) * m.raw(mid) >= half) in = mid; else out = mid;
        }
        return 0.5 * (in + out);
    };
    return cross(1.0, 1.0 + 8 * m.sigma) - cross(1.0, 0.0);
}

MorletShape solve_shape(double Q) {
    double sigma = 1 / (2 * Q * std::sqrt(std::log(2.0)));
    double mu = 1;
    for (int outer = 0; outer < 200; ++outer) {
        double lo = 1e-3, hi = 1.0;
        for (int it = 0; it < 100; ++it) {
            mu = 0.5 * (lo + hi);
            if (peak_location(make_shape(mu, sigma)) < 1.0) lo = mu; else hi = mu;
        }
        const double width = half_width(make_shape(mu, sigma));
        const double step = (1 / Q) / width;
        sigma *= step;
        if (std::abs(step - 1) < 1e-13) break;
    }
    auto m = make_shape(mu, sigma);
    m.norm = m.raw(1.0);
    return m;
}

const MorletShape& morlet_shape(double Q) {
    require(Q >= 1 && std::isfinite(Q), "Morlet quality factor must be at least 1");
    static std::mutex mu;
    static std::map<double, MorletShape> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(Q);
    if (it == cache.end()) it = cache.emplace(Q, solve_shape(Q)).first;
    return it->second;
}

} // namespace

std::vector<cplx> morlet_response(double xi, double Q, const std::vector<double>& omega) {
    require(xi > 0, "Morlet center frequency must be positive");
    require(Q >= 1, "Morlet quality factor must be at least 1");
    const auto& m = morlet_shape(Q);
    std::vector<cplx> r(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) r[k] = m.raw(omega[k] / xi) / m.norm;
    return r;
}

std::vector<cplx> gammatone_response(double xi, double Q, int order,
                                     const std::vector<double>& omega) {
    require(order >= 2, "gammatone order must be at least 2");
    require(xi > 0 && std::isfinite(xi), "gammatone center frequency must be positive");
    const auto s = gammatone_shape(Q, order);
    std::vector<cplx> r(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) r[k] = gammatone_eval(s, order, omega[k] / xi);
    return r;
}

cplx gammatone_at(double xi, double Q, int order, double omega) {
    require(xi > 0, "gammatone center frequency must be positive");
    return gammatone_eval(gammatone_shape(Q, order), order, omega / xi);
}

double gaussian_lowpass_at(double T, double omega) {
    require(T > 0, "low-pass support T must be positive");
    return std::exp2(-(omega * T) * (omega * T));
}

std::vector<double> gaussian_lowpass_response(double T, const std::vector<double>& omega) {
    require(T > 0, "low-pass support T must be positive");
    std::vector<double> r(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) r[k] = std::exp2(-(omega[k] * T) * (omega[k] * T));
    return r;
}

std::vector<cplx> mirror_response(const std::vector<cplx>& r) {
    const std::size_t n = r.size();
    std::vector<cplx> m(n);
    for (std::size_t k = 0; k < n; ++k) m[k] = std::conj(r[(n - k) % n]);
    return m;
}

std::vector<cplx> sample_kernel(const WaveletKernel& k, std::size_t n, double rate) {
    require(n >= 2, "grid must have at least two bins");
    auto omega = fft_frequencies(n, rate);
    // the Nyquist bin counts as a positive frequency for one-sided designs
    if (n % 2 == 0) omega[n / 2] = -omega[n / 2];
    const double xi = std::abs(k.center_frequency);
    std::vector<cplx> r = k.family == WaveletFamily::Morlet
                              ? morlet_response(xi, k.quality, omega)
                              : gammatone_response(xi, k.quality, k.order, omega);
    if (k.is_signed && k.center_frequency < 0) r = mirror_response(r);
    return r;
}

double half_power_width(const std::vector<cplx>& r, const std::vector<double>& omega) {
    const std::size_t n = r.size();
    if (n < 3) return 0.0;
    std::size_t kmax = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(r[k]) > std::abs(r[kmax])) kmax = k;
    const double half = std::norm(r[kmax]) / 2;
    const double df = std::abs(omega[1] - omega[0]);
    auto side = [&](int dir) {
        double prev = std::norm(r[kmax]);
        for (std::size_t step = 1; step < n; ++step) {
            const std::size_t k = (kmax + n + dir * static_cast<long long>(step)) % n;
            const double cur = std::norm(r[k]);
            if (cur < half) return (double(step) - 1 + (prev - half) / (prev - cur)) * df;
            prev = cur;
        }
        return double(n) * df;
    };
    return side(+1) + side(-1);
}

} // namespace spiral
