#include "pmlcnls/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pmlcnls/errors.hpp"

namespace pmlcnls {

double relative_error(const ComplexState& u, const ComplexState& ref) {
  const GridSpec& gu = u.grid();
  const GridSpec& gr = ref.grid();
  if (gu.omega_nx() != gr.omega_nx() || gu.omega_ny() != gr.omega_ny() ||
      std::abs(gu.dx - gr.dx) > 1e-12 * gr.dx || std::abs(gu.dy - gr.dy) > 1e-12 * gr.dy) {
    throw ConfigError("relative_error: Omega grids differ");
  }
  if (u.n_components() != ref.n_components()) {
    throw ConfigError("relative_error: component count mismatch");
  }
  double diff = 0.0;
  double norm = 0.0;
  for (int j = 0; j < ref.n_components(); ++j) {
    for (int ix = 0; ix < gr.omega_nx(); ++ix) {
      for (int iy = 0; iy < gr.omega_ny(); ++iy) {
        const cplx r = ref.at(j, ix + gr.layer_x, iy + gr.layer_y);
        diff += std::norm(u.at(j, ix + gu.layer_x, iy + gu.layer_y) - r);
        norm += std::norm(r);
      }
    }
  }
  if (!(norm > 0.0)) throw ConfigError("relative_error: reference has zero norm");
  return std::sqrt(diff / norm);
}

namespace {

double max_abs_where(const ComplexState& u, int component, bool want_omega) {
  const GridSpec& g = u.grid();
  const int j0 = component < 0 ? 0 : component;
  const int j1 = component < 0 ? u.n_components() : component + 1;
  if (j0 >= u.n_components()) throw ConfigError("max_abs: component out of range");
  double m = 0.0;
  for (int j = j0; j < j1; ++j) {
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int iy = 0; iy < g.ny; ++iy) {
        if (g.in_omega(ix, iy) == want_omega) m = std::max(m, std::abs(u.at(j, ix, iy)));
      }
    }
  }
  return m;
}

}  // namespace

double max_abs_omega(const ComplexState& u, int component) { return max_abs_where(u, component, true); }
double max_abs_layers(const ComplexState& u, int component) { return max_abs_where(u, component, false); }

double log_linear_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("correlation: need matching samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) throw ConfigError("correlation: values must be positive");
    mx += x[i];
    my += std::log10(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = std::log10(y[i]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

RateFit fit_rate(std::span<const double> deltas, std::span<const double> errors) {
  if (deltas.size() != errors.size()) throw ConfigError("fit_rate: size mismatch");
  if (deltas.size() < 3) throw ConfigError("fit_rate: at least 3 points required");
  const double n = static_cast<double>(deltas.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      throw ConfigError("fit_rate: errors must be positive and finite");
    }
    mx += deltas[i];
    my += std::log10(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    sxy += (deltas[i] - mx) * (std::log10(errors[i]) - my);
    sxx += (deltas[i] - mx) * (deltas[i] - mx);
  }
  const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
  if (!(*hi - *lo > 1e-12 * std::max(1.0, std::abs(*hi)))) {
    throw ConfigError("fit_rate: deltas must not all coincide");
  }
  const double slope = sxy / sxx;
  RateFit fit;
  fit.p = -slope;
  fit.c = std::pow(10.0, my - slope * mx);
  fit.correlation = log_linear_correlation(deltas, errors);
  return fit;
}

RateFit fit_rate(std::span<const SweepPoint> points) {
  std::vector<double> d, e;
  for (const auto& pt : points) {
    d.push_back(pt.delta);
    e.push_back(pt.e_r);
  }
  return fit_rate(d, e);
}

}  // namespace pmlcnls
