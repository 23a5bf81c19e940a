#pragma once

#include <span>
#include <vector>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

/// ||u - ref||_{L2(Omega)} / ||ref||_{L2(Omega)} summed over components. Either
/// state may carry layers; their Omega grids must coincide (same spacing and
/// point counts). Throws ConfigError on mismatch or a zero reference.
double relative_error(const ComplexState& u, const ComplexState& ref);

/// max |u_j| over the physical points, over the layer points (0 without
/// layers), optionally for a single component (component < 0: all).
double max_abs_omega(const ComplexState& u, int component = -1);
double max_abs_layers(const ComplexState& u, int component = -1);

struct SweepPoint {
  double delta = 0.0;
  double e_r = 0.0;
  double time = 0.0;
};

/// Least-squares model log10 e_r = log10 c - p delta.
struct RateFit {
  double c = 0.0;
  double p = 0.0;
  double correlation = 0.0;  // Pearson r of (delta, log10 e_r)
};

/// Throws ConfigError for fewer than 3 points, non-positive errors or
/// repeated deltas only.
RateFit fit_rate(std::span<const double> deltas, std::span<const double> errors);
RateFit fit_rate(std::span<const SweepPoint> points);

/// Pearson correlation of (x, log10 y).
double log_linear_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace pmlcnls
