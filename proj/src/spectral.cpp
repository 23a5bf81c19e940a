#include "pmlcnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/log.hpp"

namespace pmlcnls {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralPropagator::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralPropagator::SpectralPropagator(int nx, int ny, double dx, double dy)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), plans_(std::make_unique<Plans>()) {
  if (nx < 2 || ny < 2 || !(dx > 0.0) || !(dy > 0.0)) {
    throw ConfigError("spectral: invalid box");
  }
  std::lock_guard lock(plan_mutex());
  const auto n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  plans_->buffer = fftw_alloc_complex(n);
  plans_->forward = fftw_plan_dft_2d(nx, ny, plans_->buffer, plans_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_2d(nx, ny, plans_->buffer, plans_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw NumericalError("spectral: FFTW planning failed");
}

SpectralPropagator::~SpectralPropagator() {
  if (!plans_) return;
  std::lock_guard lock(plan_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
  if (plans_->buffer) fftw_free(plans_->buffer);
}

namespace {

double wavenumber(int i, int n, double d) {
  const int m = i <= n / 2 ? i : i - n;
  return 2.0 * std::numbers::pi * m / (n * d);
}

// D1 e^{ikx} = i k1 e^{ikx} and D2 e^{ikx} = -k2 e^{ikx}.
double first_difference_symbol(double k, double d) {
  const double th = k * d;
  return (8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * d);
}

double second_difference_symbol(double k, double d) {
  const double th = k * d;
  return (30.0 - 32.0 * std::cos(th) + 2.0 * std::cos(2.0 * th)) / (12.0 * d * d);
}

}  // namespace

double SpectralPropagator::kx(int i) const { return wavenumber(i, nx_, dx_); }
double SpectralPropagator::ky(int i) const { return wavenumber(i, ny_, dy_); }

void SpectralPropagator::evolve(std::vector<cplx>& field, const ComponentCoefficients& c,
                                double t, SpectralSymbol symbol) const {
  const auto n = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  if (field.size() != n) throw ConfigError("spectral: field size mismatch");
  auto* buf = reinterpret_cast<cplx*>(plans_->buffer);
  std::copy(field.begin(), field.end(), buf);
  fftw_execute(plans_->forward);
  const double scale = 1.0 / static_cast<double>(n);
  const bool fd = symbol == SpectralSymbol::FourthOrderDifference;
  for (int i = 0; i < nx_; ++i) {
    const double kx = this->kx(i);
    const double k1x = fd ? first_difference_symbol(kx, dx_) : kx;
    const double k2x = fd ? second_difference_symbol(kx, dx_) : kx * kx;
    for (int j = 0; j < ny_; ++j) {
      const double ky = this->ky(j);
      const double k1y = fd ? first_difference_symbol(ky, dy_) : ky;
      const double k2y = fd ? second_difference_symbol(ky, dy_) : ky * ky;
      const double omega = c.alpha_x * k2x + c.alpha_y * k2y + c.beta * k1x * k1y;
      buf[static_cast<std::size_t>(i) * ny_ + j] *= std::polar(scale, -omega * t);
    }
  }
  fftw_execute(plans_->backward);
  std::copy(buf, buf + n, field.begin());
}

double boundary_mass_fraction(const std::vector<cplx>& field, int nx, int ny) {
  double total = 0.0;
  double edge = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double m = std::norm(field[static_cast<std::size_t>(i) * ny + j]);
      total += m;
      if (i < 2 || i >= nx - 2 || j < 2 || j >= ny - 2) edge += m;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

std::vector<cplx> spectral_evolve(std::vector<cplx> field, int nx, int ny, double dx, double dy,
                                  const ComponentCoefficients& coeffs, double t,
                                  SpectralReport* report) {
  SpectralPropagator p(nx, ny, dx, dy);
  p.evolve(field, coeffs, t);
  SpectralReport r{nx, ny, boundary_mass_fraction(field, nx, ny), false};
  r.localization_warning = r.boundary_fraction > 1e-8;
  if (r.localization_warning) {
    std::ostringstream msg;
    msg << "spectral reference not localized: boundary mass fraction " << r.boundary_fraction;
    log_message(LogLevel::Warning, msg.str());
  }
  if (report) *report = r;
  return field;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

ComplexState spectral_reference(const std::vector<std::function<cplx(double, double)>>& initial,
                                const CnlsCoefficients& coeffs, const DomainLayout& layout,
                                const GridSpec& grid, double t, int factor,
                                SpectralReport* report, SpectralSymbol symbol) {
  if (static_cast<int>(initial.size()) != coeffs.n_components()) {
    throw ConfigError("spectral: one initial function per component required");
  }
  if (factor < 1) throw ConfigError("spectral: enlargement factor must be >= 1");
  const auto [omega_layout, omega_grid] = omega_only(layout, grid);
  const int cells_x = omega_grid.nx - 1;
  const int cells_y = omega_grid.ny - 1;
  const int bx = next_pow2(factor * cells_x);
  const int by = next_pow2(factor * cells_y);
  const int ox = (bx - omega_grid.nx) / 2;
  const int oy = (by - omega_grid.ny) / 2;

  SpectralPropagator prop(bx, by, grid.dx, grid.dy);
  ComplexState out(omega_layout, omega_grid, coeffs.n_components());
  SpectralReport worst{bx, by, 0.0, false};
  std::vector<cplx> field(static_cast<std::size_t>(bx) * by);
  for (int j = 0; j < coeffs.n_components(); ++j) {
    for (int i = 0; i < bx; ++i) {
      const double x = (i - ox) * grid.dx;
      for (int k = 0; k < by; ++k) {
        field[static_cast<std::size_t>(i) * by + k] = initial[j](x, (k - oy) * grid.dy);
      }
    }
    prop.evolve(field, coeffs.component(j), t, symbol);
    worst.boundary_fraction = std::max(worst.boundary_fraction, boundary_mass_fraction(field, bx, by));
    for (int i = 0; i < omega_grid.nx; ++i) {
      for (int k = 0; k < omega_grid.ny; ++k) {
        out.at(j, i, k) = field[static_cast<std::size_t>(i + ox) * by + (k + oy)];
      }
    }
  }
  worst.localization_warning = worst.boundary_fraction > 1e-8;
  if (worst.localization_warning) {
    std::ostringstream msg;
    msg << "spectral reference not localized: boundary mass fraction " << worst.boundary_fraction;
    log_message(LogLevel::Warning, msg.str());
  }
  if (report) *report = worst;
  return out;
}

}  // namespace pmlcnls
