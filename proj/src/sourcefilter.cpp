#include "sourcefilter.hpp"

#include "errors.hpp"
#include "filterbank.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spiral {

DiffeoState eval_diffeo(const Diffeo& d, double t) {
    const double ln2 = std::numbers::ln2;
    const double w0 = 2 * std::numbers::pi * d.initial_rate;
    DiffeoState s;
    if (d.velocity == 0) {
        s.theta = w0 * t;
        s.theta_dot = w0;
    } else {
        const double k = d.velocity * ln2;
        s.theta = w0 * std::expm1(k * t) / k;
        s.theta_dot = w0 * std::exp2(d.velocity * t);
    }
    s.relative_acceleration = d.velocity * ln2;
    return s;
}

double envelope_gain(const Envelope& e, double u) {
    if (e.flat) return 1.0;
    const double l = std::log2(u);
    return std::exp(-l * l / (2 * e.width * e.width));
}

namespace {

void validate(const SourceFilterSpec& s) {
    require(s.sample_rate > 0, "sample rate must be positive");
    require(s.duration > 0, "duration must be positive");
    require(s.partials >= 1, "partial count must be at least 1");
    require(s.source.initial_rate > 0, "source initial rate must be positive");
    require(s.filter.initial_rate > 0, "filter initial rate must be positive");
    require(std::isfinite(s.source.velocity) && std::isfinite(s.filter.velocity),
            "velocities must be finite");
    require(s.envelope.flat || s.envelope.width > 0, "envelope width must be positive");
    require(2 * s.partials < s.analysis_Q,
            "partial count must stay below Q/2 of the analysis bank");
    const double top = s.partials * s.source.initial_rate *
                       std::max(1.0, std::exp2(s.source.velocity * s.duration));
    require(top < s.sample_rate / 2, "top partial crosses the Nyquist frequency");
}

void check_hypotheses(const SourceFilterSpec& s, std::vector<std::string>& warnings) {
    const double fmax = kDefaultFmaxRatio * s.sample_rate;
    const double lam_min = order1_center(s.analysis_Q, s.analysis_J, fmax, 0);
    const double bound = 0.1 * lam_min / s.analysis_Q;
    auto fmt = [](double v) {
        std::ostringstream o;
        o << v;
        return o.str();
    };
    const double src = std::abs(s.source.velocity * std::numbers::ln2);
    const double flt = std::abs(s.filter.velocity * std::numbers::ln2);
    if (src > bound)
        warnings.push_back("slowly varying source hypothesis violated: |θ̈/θ̇| = " + fmt(src) +
                           " /s exceeds " + fmt(bound));
    if (flt > bound)
        warnings.push_back("slowly varying filter hypothesis violated: |η̈/η̇| = " + fmt(flt) +
                           " /s exceeds " + fmt(bound));
    if (!s.envelope.flat) {
        // log-gain change across one first-order bandwidth, worst partial and time
        double worst = 0;
        for (double t : {0.0, s.duration}) {
            const double f = s.source.initial_rate * std::exp2(s.source.velocity * t);
            const double c = s.filter.initial_rate * std::exp2(s.filter.velocity * t);
            for (int p = 1; p <= s.partials; ++p) {
                const double l = std::abs(std::log2(p * f / c));
                worst = std::max(worst, l / (s.envelope.width * s.envelope.width * s.analysis_Q));
            }
        }
        if (worst > 0.1)
            warnings.push_back("spectral regularity hypothesis violated: envelope log-gain varies by " +
                               fmt(worst) + " per filter bandwidth");
    }
}

void render(const SourceFilterSpec& s, double phase0, std::size_t count, double* out) {
    for (std::size_t n = 0; n < count; ++n) {
        const double t = static_cast<double>(n) / s.sample_rate;
        const auto src = eval_diffeo(s.source, t);
        const auto flt = eval_diffeo(s.filter, t);
        const double theta = phase0 + src.theta;
        double acc = 0;
        for (int p = 1; p <= s.partials; ++p)
            acc += envelope_gain(s.envelope, p * src.theta_dot / flt.theta_dot) * std::cos(p * theta);
        out[n] = acc;
    }
}

std::size_t sample_count(const SourceFilterSpec& s) {
    return static_cast<std::size_t>(std::llround(s.duration * s.sample_rate));
}

} // namespace

Synthesis synthesize(const SourceFilterSpec& spec) {
    return synthesize_chain({spec});
}

Synthesis synthesize_chain(const std::vector<SourceFilterSpec>& segments) {
    require(!segments.empty(), "no segments to synthesize");
    Synthesis out;
    double phase = 0;
    Diffeo src = segments.front().source, flt = segments.front().filter;
    for (const auto& seg : segments) {
        require(seg.sample_rate == segments.front().sample_rate,
                "segments must share one sample rate");
        SourceFilterSpec s = seg;
        s.source.initial_rate = src.initial_rate;
        s.filter.initial_rate = flt.initial_rate;
        validate(s);
        check_hypotheses(s, out.warnings);
        const std::size_t n = sample_count(s);
        const std::size_t start = out.samples.size();
        out.samples.resize(start + n);
        render(s, phase, n, out.samples.data() + start);
        const double tend = static_cast<double>(n) / s.sample_rate;
        phase += eval_diffeo(s.source, tend).theta;
        src.initial_rate *= std::exp2(s.source.velocity * tend);
        flt.initial_rate *= std::exp2(s.filter.velocity * tend);
    }
    return out;
}

std::vector<double> harmonic_comb(double f0, int partials, double duration, double sample_rate,
                                  double stretch) {
    require(f0 > 0, "f0 must be positive");
    require(partials >= 1, "partial count must be at least 1");
    require(duration > 0 && sample_rate > 0, "duration and sample rate must be positive");
    require(partials * f0 * (1 + stretch * partials) < sample_rate / 2,
            "top partial crosses the Nyquist frequency");
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    std::vector<double> x(n, 0.0);
    for (int p = 1; p <= partials; ++p) {
        const double w = 2 * std::numbers::pi * p * f0 * (1 + stretch * p) / sample_rate;
        for (std::size_t k = 0; k < n; ++k) x[k] += std::cos(w * static_cast<double>(k));
    }
    return x;
}

} // namespace spiral
