#pragma once

#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace th {

inline double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    return dist2(a, b) / std::max(norm2(b), 1e-300);
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline std::vector<double> sine(double f, double dur, double fs, double amp = 1.0) {
    std::vector<double> x(static_cast<std::size_t>(std::llround(dur * fs)));
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = amp * std::sin(2 * std::numbers::pi * f * n / fs);
    return x;
}

inline std::vector<double> white(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> x(n);
    for (auto& v : x) v = nd(rng);
    return x;
}

inline std::vector<double> magnitudes(const std::vector<spiral::cplx>& r) {
    std::vector<double> m(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) m[k] = std::abs(r[k]);
    return m;
}

// Spearman rank correlation, no tie correction.
inline double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size()), m = (n - 1) / 2;
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - m) * (rb[i] - m);
        da += (ra[i] - m) * (ra[i] - m);
        db += (rb[i] - m) * (rb[i] - m);
    }
    return num / std::sqrt(da * db);
}

} // namespace th

namespace th {
// |a - b| <= tol * |b|; doctest's Approx adds a unit scale we do not want
inline bool near_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}
