#pragma once

#include "filterbank.hpp"
#include "scalogram.hpp"
#include "scattering.hpp"

#include <vector>

namespace spiral {

// ‖(x1 - mean over octaves) *_j ψ_γ‖ / ‖x1‖ on interior octaves, maximized over γ.
double harmonicity_residual(const Scalogram& sc, const Filterbank& bank_gamma);

// ‖(x1 - per-frame affine fit) *_logλ ψ_β‖ / ‖x1‖ away from the outer octaves,
// maximized over β.
double spectral_regularity_residual(const Scalogram& sc, const Filterbank& bank_beta);

struct PlaneFit {
    double estimated_source_velocity = 0;  // oct/s
    double estimated_filter_velocity = 0;  // oct/s
    double residual = 0;
    double t = 0;                          // seconds, window center
    double mass_fraction = 0;
};

struct PairEstimate {
    double beta = 0;
    double gamma = 0;
    double energy = 0;
    double alpha_star = 0;
    bool used = false;  // inside the fitted quadrant
};

struct PlaneFitOptions {
    // frame window [begin, end); begin == end selects the central half
    std::size_t frame_begin = 0;
    std::size_t frame_end = 0;
    // energy of x1 over the same window; when positive, per-α energies below
    // noise_floor * reference_energy are treated as absent
    double reference_energy = 0;
    double noise_floor = 1e-4;
};

PlaneFit fit_plane(const ScatteringCoefficients& x2, const PlaneFitOptions& options = {},
                   std::vector<PairEstimate>* pairs = nullptr);

// Σ x1² over frames [begin, end) (central half when begin == end).
double window_energy(const Scalogram& sc, std::size_t begin = 0, std::size_t end = 0);

struct SpinAsymmetry {
    double beta_ratio = 0;   // NaN when the axis is absent
    double gamma_ratio = 0;
};

SpinAsymmetry spin_asymmetry(const ScatteringCoefficients& x2, std::size_t frame_begin,
                             std::size_t frame_end);

// Continuous α maximizing the normalized correlation between an energy profile
// over the α bank and the profile a single ridge would leave: |ψ̂_α(f)|², spread
// over the passband of the Q = 1 β filter when beta != 0. An all-zero profile
// returns the smallest α.
double template_alpha(const std::vector<double>& alphas, const std::vector<double>& energy,
                      double beta = 0);

} // namespace spiral
