#include "pmlcnls/pml.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmlcnls/analysis.hpp"
#include "pmlcnls/errors.hpp"
#include "pmlcnls/log.hpp"

namespace pmlcnls {

void PmlParameters::validate() const {
  if (!(rho > 0.0 && rho < std::numbers::pi / 2.0)) {
    throw ConfigError("pml: rho must lie in (0, pi/2)");
  }
  if (!(hx >= 0.0) || !(hy >= 0.0)) throw ConfigError("pml: hx and hy must be non-negative");
}

namespace {

// Distance into the layer measured from the interface (positive inside),
// clamped to the box. Returns false on the physical interval.
bool layer_depth(double length, double delta, double x, double& depth) {
  if (x > length) {
    depth = std::min(x - length, delta);
    return true;
  }
  if (x < 0.0) {
    depth = std::min(-x, delta);
    return true;
  }
  return false;
}

}  // namespace

double sigma_eval(double h, double length, double delta, double x) {
  double d;
  if (delta <= 0.0 || h == 0.0 || !layer_depth(length, delta, x, d)) return 0.0;
  // The left layer is the mirror image of the right one.
  const double a = 12.0 / delta;
  return h / 4.0 * (1.0 + std::tanh(a * (d - delta / 2.0))) *
         (1.0 + std::tanh(6.0 * a * (d - delta / 8.0)));
}

double sigma_derivative(double h, double length, double delta, double x) {
  double d;
  if (delta <= 0.0 || h == 0.0 || !layer_depth(length, delta, x, d)) return 0.0;
  if (x > length + delta || x < -delta) return 0.0;
  const double a = 12.0 / delta;
  const double t1 = std::tanh(a * (d - delta / 2.0));
  const double t2 = std::tanh(6.0 * a * (d - delta / 8.0));
  const double dd = h / 4.0 * (a * (1.0 - t1 * t1) * (1.0 + t2) + (1.0 + t1) * 6.0 * a * (1.0 - t2 * t2));
  return x > length ? dd : -dd;
}

double max_sigma(double h, double length, double delta, int samples) {
  if (delta <= 0.0 || h == 0.0) return 0.0;
  samples = std::max(samples, 1000);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = length + delta * k / (samples - 1);
    best = std::max(best, sigma_eval(h, length, delta, x));
  }
  return best;
}

AbsorptionProfile AbsorptionProfile::constant(const GridSpec& grid, double sigma_x,
                                              double sigma_y) {
  AbsorptionProfile p;
  p.sigma_x.assign(grid.nx, sigma_x);
  p.dsigma_x.assign(grid.nx, 0.0);
  p.sigma_y.assign(grid.ny, sigma_y);
  p.dsigma_y.assign(grid.ny, 0.0);
  p.max_x = sigma_x;
  p.max_y = sigma_y;
  return p;
}

AbsorptionProfile build_profiles(const DomainLayout& layout, const GridSpec& grid,
                                 const PmlParameters& pml) {
  check_alignment(layout, grid);
  pml.validate();
  AbsorptionProfile p;
  p.sigma_x.resize(grid.nx);
  p.dsigma_x.resize(grid.nx);
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    p.sigma_x[i] = sigma_eval(pml.hx, layout.lx, layout.delta_x, x);
    p.dsigma_x[i] = sigma_derivative(pml.hx, layout.lx, layout.delta_x, x);
  }
  p.sigma_y.resize(grid.ny);
  p.dsigma_y.resize(grid.ny);
  for (int i = 0; i < grid.ny; ++i) {
    const double y = grid.y(i);
    p.sigma_y[i] = sigma_eval(pml.hy, layout.ly, layout.delta_y, y);
    p.dsigma_y[i] = sigma_derivative(pml.hy, layout.ly, layout.delta_y, y);
  }
  p.max_x = max_sigma(pml.hx, layout.lx, layout.delta_x);
  p.max_y = max_sigma(pml.hy, layout.ly, layout.delta_y);
  return p;
}

StabilityReport check_stability(const AbsorptionProfile& profile,
                                const CnlsCoefficients& coeffs) {
  StabilityReport r;
  r.max_sigma_x = profile.max_x;
  r.max_sigma_y = profile.max_y;
  r.threshold = system_threshold(coeffs);
  const double worst = std::max(profile.max_x, profile.max_y);
  r.stable = worst < r.threshold;
  std::ostringstream msg;
  msg << "max sigma " << worst << (r.stable ? " below" : " exceeds") << " stability threshold "
      << r.threshold;
  r.message = msg.str();
  if (!r.stable) log_message(LogLevel::Warning, r.message + "; layer may be unstable");
  return r;
}

PmlCoefficientFields build_coefficient_fields(const AbsorptionProfile& profile,
                                              const ComponentCoefficients& coeffs, double rho) {
  const cplx e = std::polar(1.0, rho);
  const cplx kx = e * coeffs.beta / (2.0 * coeffs.alpha_x);
  const cplx ky = e * coeffs.beta / (2.0 * coeffs.alpha_y);
  PmlCoefficientFields f;
  auto fill = [e](const std::vector<double>& s, const std::vector<double>& ds, cplx k,
                  std::vector<cplx>& c, std::vector<cplx>& dc, std::vector<cplx>& g,
                  std::vector<cplx>& dg) {
    const std::size_t n = s.size();
    c.resize(n);
    dc.resize(n);
    g.resize(n);
    dg.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = 1.0 / (1.0 + e * s[i]);
      dc[i] = -e * ds[i] * c[i] * c[i];
      g[i] = k * s[i];
      dg[i] = k * ds[i];
    }
  };
  fill(profile.sigma_x, profile.dsigma_x, kx, f.cx, f.dcx, f.gx, f.dgx);
  fill(profile.sigma_y, profile.dsigma_y, ky, f.cy, f.dcy, f.gy, f.dgy);
  return f;
}

std::vector<PmlCoefficientFields> build_coefficient_fields(const AbsorptionProfile& profile,
                                                           const CnlsCoefficients& coeffs,
                                                           double rho) {
  std::vector<PmlCoefficientFields> out;
  for (int j = 0; j < coeffs.n_components(); ++j) {
    out.push_back(build_coefficient_fields(profile, coeffs.component(j), rho));
  }
  return out;
}

}  // namespace pmlcnls
