#include "validation.hpp"

#include "conv.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace spiral {
namespace {

std::pair<std::size_t, std::size_t> central_half(std::size_t frames, std::size_t b, std::size_t e) {
    if (b == e) return {frames / 4, frames - frames / 4};
    require(b < e && e <= frames, "frame window out of range");
    return {b, e};
}

} // namespace

double harmonicity_residual(const Scalogram& sc, const Filterbank& bank_gamma) {
    require(bank_gamma.kind == BankKind::ModulationOctave, "gamma bank must be an octave bank");
    const std::size_t T = sc.frames, L = sc.channels;
    const std::size_t Q = static_cast<std::size_t>(sc.Q), J = static_cast<std::size_t>(sc.J);
    require(L == Q * J, "log-frequency grid is not Q x J rectangular");
    require(bank_gamma.grid_size >= J, "gamma bank grid shorter than the octave axis");
    const std::size_t j0 = J >= 3 ? 1 : 0, j1 = J >= 3 ? J - 1 : J;

    std::vector<cplx> detrended(T * L);
    double denom = 0;
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < Q; ++c) {
            double mean = 0;
            for (std::size_t j = 0; j < J; ++j) mean += sc.values[t * L + j * Q + c];
            mean /= static_cast<double>(J);
            for (std::size_t j = 0; j < J; ++j) {
                const double v = sc.values[t * L + j * Q + c];
                detrended[t * L + j * Q + c] = v - mean;
                if (j >= j0 && j < j1) denom += v * v;
            }
        }
    if (denom == 0) return 0.0;

    LineSet lines;
    lines.length = J;
    lines.stride = Q;
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < Q; ++c) lines.starts.push_back(t * L + c);

    double best = 0;
    for (const auto& resp : bank_gamma.responses) {
        auto z = detrended;
        convolve_lines_zero(z, lines, resp);
        double num = 0;
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = j0; j < j1; ++j)
                for (std::size_t c = 0; c < Q; ++c) num += std::norm(z[t * L + j * Q + c]);
        best = std::max(best, std::sqrt(num / denom));
    }
    return best;
}

double spectral_regularity_residual(const Scalogram& sc, const Filterbank& bank_beta) {
    require(bank_beta.kind == BankKind::ModulationLogfreq, "beta bank must be a log-frequency bank");
    const std::size_t T = sc.frames, L = sc.channels;
    require(bank_beta.grid_size >= L, "beta bank grid shorter than the frequency axis");
    const std::size_t Q = static_cast<std::size_t>(sc.Q);
    const std::size_t i0 = L > 2 * Q ? Q : 0, i1 = L > 2 * Q ? L - Q : L;

    // least-squares line over the channel index, removed frame by frame
    const double n = static_cast<double>(L);
    const double mean_i = (n - 1) / 2;
    double sii = 0;
    for (std::size_t i = 0; i < L; ++i) sii += (i - mean_i) * (i - mean_i);
    std::vector<cplx> resid(T * L);
    double denom = 0;
    for (std::size_t t = 0; t < T; ++t) {
        const double* row = sc.values.data() + t * L;
        double mean_x = 0, sxi = 0;
        for (std::size_t i = 0; i < L; ++i) mean_x += row[i];
        mean_x /= n;
        for (std::size_t i = 0; i < L; ++i) sxi += (i - mean_i) * (row[i] - mean_x);
        const double slope = sii > 0 ? sxi / sii : 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            resid[t * L + i] = row[i] - (mean_x + slope * (i - mean_i));
            if (i >= i0 && i < i1) denom += row[i] * row[i];
        }
    }
    if (denom == 0) return 0.0;

    double best = 0;
    for (const auto& resp : bank_beta.responses) {
        auto z = resid;
        convolve_lines_zero(z, row_lines(T, L), resp);
        double num = 0;
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t i = i0; i < i1; ++i) num += std::norm(z[t * L + i]);
        best = std::max(best, std::sqrt(num / denom));
    }
    return best;
}

double template_alpha(const std::vector<double>& alphas, const std::vector<double>& energy, double beta) {
    require(!alphas.empty() && alphas.size() == energy.size(), "alpha profile size mismatch");
    double enorm = 0;
    for (double e : energy) enorm += e * e;
    if (enorm == 0) return alphas.front();
    const auto shape = gammatone_shape(1.0, kGammatoneOrder);

    // Spread of the β filter: a ridge giving α = f at the β center gives
    // α = f·b/|β| at the other frequencies b the filter lets through.
    std::vector<double> spread{1.0}, weight{1.0};
    if (beta != 0) {
        const double B = std::abs(beta);
        std::vector<double> grid;
        for (int k = 1; k < 200; ++k) grid.push_back(k * B / 50.0);
        const auto m = morlet_response(B, 1.0, grid);
        spread.clear();
        weight.clear();
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::norm(m[k]) > 1e-4) {
                spread.push_back(grid[k] / B);
                weight.push_back(std::norm(m[k]));
            }
    }

    const double lo = std::log2(alphas.front()) - 2, hi = std::log2(alphas.back()) + 1;
    const int steps = 800;
    double best_f = alphas.front(), best_c = -std::numeric_limits<double>::infinity();
    std::vector<double> tmpl(alphas.size());
    for (int s = 0; s < steps; ++s) {
        const double f = std::exp2(lo + (hi - lo) * s / (steps - 1));
        double tn = 0, dot = 0;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            double t = 0;
            for (std::size_t k = 0; k < spread.size(); ++k)
                t += weight[k] * std::norm(gammatone_eval(shape, kGammatoneOrder, f * spread[k] / alphas[a]));
            tmpl[a] = t;
            tn += t * t;
            dot += t * energy[a];
        }
        if (tn == 0) continue;
        const double c = dot / std::sqrt(tn);
        // strict improvement only, so ties keep the smaller α
        if (c > best_c) {
            best_c = c;
            best_f = f;
        }
    }
    return best_f;
}

double window_energy(const Scalogram& sc, std::size_t begin, std::size_t end) {
    const auto [b, e] = central_half(sc.frames, begin, end);
    double s = 0;
    for (std::size_t t = b; t < e; ++t)
        for (std::size_t i = 0; i < sc.channels; ++i) s += sc.at(t, i) * sc.at(t, i);
    return s;
}

PlaneFit fit_plane(const ScatteringCoefficients& x2, const PlaneFitOptions& options,
                   std::vector<PairEstimate>* pairs_out) {
    const auto [b, e] = central_half(x2.frames, options.frame_begin, options.frame_end);

    std::vector<double> alphas;
    for (const auto& p : x2.paths) alphas.push_back(p.alpha);
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    if (alphas.empty()) throw FitError("no scattering paths to fit");

    // energy per (β, γ) and α over the window, summed over λ1
    std::map<std::pair<double, double>, std::vector<double>> prof;
    double total = 0;
    for (std::size_t p = 0; p < x2.paths.size(); ++p) {
        const auto& path = x2.paths[p];
        auto& v = prof[{path.beta, path.gamma}];
        if (v.empty()) v.assign(alphas.size(), 0.0);
        const std::size_t a = std::lower_bound(alphas.begin(), alphas.end(), path.alpha) - alphas.begin();
        const double* s = x2.series(p);
        double acc = 0;
        for (std::size_t t = b; t < e; ++t) acc += s[t] * s[t];
        v[a] += acc;
        total += acc;
    }
    if (!(total > 0)) throw FitError("scattering coefficients carry no energy in the window");
    const double floor = options.reference_energy > 0 ? options.noise_floor * options.reference_energy : 0.0;

    // dominant spin quadrant
    std::map<std::pair<int, int>, double> quad;
    auto sgn = [](double v) { return (v > 0) - (v < 0); };
    for (const auto& [key, v] : prof) {
        double s = 0;
        for (double x : v) s += x;
        quad[{sgn(key.first), sgn(key.second)}] += s;
    }
    std::pair<int, int> dom{0, 0};
    double dom_e = -1;
    for (const auto& [k, s] : quad)
        if (s > dom_e) {
            dom_e = s;
            dom = k;
        }

    std::vector<PairEstimate> pairs;
    for (const auto& [key, v] : prof) {
        PairEstimate pe;
        pe.beta = key.first;
        pe.gamma = key.second;
        std::vector<double> clean(v.size());
        for (std::size_t a = 0; a < v.size(); ++a) {
            pe.energy += v[a];
            clean[a] = std::max(0.0, v[a] - floor);
        }
        pe.alpha_star = template_alpha(alphas, clean, pe.beta);
        pe.used = sgn(pe.beta) == dom.first && sgn(pe.gamma) == dom.second && pe.energy > 0;
        pairs.push_back(pe);
    }

    // weighted least squares through the origin: α* = c1 β + c2 γ
    bool has_gamma = false;
    std::size_t used = 0;
    for (const auto& pe : pairs)
        if (pe.used) {
            ++used;
            has_gamma = has_gamma || pe.gamma != 0;
        }
    if (used < 3) throw FitError("fewer than three (beta, gamma) pairs in the dominant quadrant");
    double sbb = 0, sbg = 0, sgg = 0, sby = 0, sgy = 0, syy = 0;
    for (const auto& pe : pairs) {
        if (!pe.used) continue;
        const double w = pe.energy, y = pe.alpha_star;
        sbb += w * pe.beta * pe.beta;
        sbg += w * pe.beta * pe.gamma;
        sgg += w * pe.gamma * pe.gamma;
        sby += w * pe.beta * y;
        sgy += w * pe.gamma * y;
        syy += w * y * y;
    }
    double c1 = 0, c2 = 0;
    if (has_gamma) {
        const double det = sbb * sgg - sbg * sbg;
        if (!(std::abs(det) > 1e-12 * std::max(sbb * sgg, 1e-300)))
            throw FitError("plane fit is singular for these (beta, gamma) pairs");
        c1 = (sby * sgg - sgy * sbg) / det;
        c2 = (sgy * sbb - sby * sbg) / det;
    } else {
        if (!(sbb > 0)) throw FitError("plane fit is singular for these (beta, gamma) pairs");
        c1 = sby / sbb;
    }
    double sse = 0;
    for (const auto& pe : pairs) {
        if (!pe.used) continue;
        const double r = pe.alpha_star - (c1 * pe.beta + c2 * pe.gamma);
        sse += pe.energy * r * r;
    }

    // x2 energy within one α bin of the fitted plane, over all pairs
    double near = 0;
    const double amin = alphas.front(), amax = alphas.back();
    for (const auto& [key, v] : prof) {
        const double pred = std::clamp(std::abs(c1 * key.first + c2 * key.second), amin, amax);
        for (std::size_t a = 0; a < alphas.size(); ++a)
            if (std::abs(std::log2(alphas[a] / pred)) <= 1.0 + 1e-9) near += v[a];
    }

    PlaneFit fit;
    fit.estimated_source_velocity = c1;
    fit.estimated_filter_velocity = c2;
    fit.residual = syy > 0 ? std::sqrt(sse / syy) : 0.0;
    fit.t = 0.5 * static_cast<double>(b + e) / x2.frame_rate;
    fit.mass_fraction = std::clamp(near / total, 0.0, 1.0);
    if (pairs_out) *pairs_out = std::move(pairs);
    return fit;
}

SpinAsymmetry spin_asymmetry(const ScatteringCoefficients& x2, std::size_t frame_begin,
                             std::size_t frame_end) {
    require(frame_begin < frame_end && frame_end <= x2.frames, "frame window out of range");
    double bp = 0, bn = 0, gp = 0, gn = 0;
    for (std::size_t p = 0; p < x2.paths.size(); ++p) {
        const double* s = x2.series(p);
        double acc = 0;
        for (std::size_t t = frame_begin; t < frame_end; ++t) acc += s[t] * s[t];
        const auto& path = x2.paths[p];
        if (path.beta > 0) bp += acc;
        if (path.beta < 0) bn += acc;
        if (path.gamma > 0) gp += acc;
        if (path.gamma < 0) gn += acc;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SpinAsymmetry r;
    r.beta_ratio = bn > 0 ? bp / bn : nan;
    r.gamma_ratio = gn > 0 ? gp / gn : nan;
    return r;
}

} // namespace spiral
