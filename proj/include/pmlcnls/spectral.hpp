#pragma once

// Fourier reference solver for the linear constant-coefficient problem
//   i u_t + (ax d_xx + ay d_yy + b d_xy) u = 0
// on a periodic box much larger than the physical domain.

#include <functional>
#include <memory>
#include <vector>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

/// Dispersion used by the multiplier. FourthOrderDifference replaces k^2 and k
/// by the symbols of the five-point second and first differences, which gives
/// the semi-discrete solution of the finite-difference scheme without layers.
enum class SpectralSymbol { Exact, FourthOrderDifference };

/// Evolves fields on an nx-by-ny periodic grid (index ix*ny+iy). Plans are
/// created once; evolve() is not reentrant on one instance.
class SpectralPropagator {
 public:
  SpectralPropagator(int nx, int ny, double dx, double dy);
  ~SpectralPropagator();
  SpectralPropagator(const SpectralPropagator&) = delete;
  SpectralPropagator& operator=(const SpectralPropagator&) = delete;

  /// In place: multiplies the transform by exp(-i omega(kx, ky) t).
  void evolve(std::vector<cplx>& field, const ComponentCoefficients& coeffs, double t,
              SpectralSymbol symbol = SpectralSymbol::Exact) const;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double kx(int i) const;
  double ky(int i) const;

 private:
  struct Plans;
  int nx_, ny_;
  double dx_, dy_;
  std::unique_ptr<Plans> plans_;
};

/// Fraction of the L2 mass within two cells of the periodic boundary.
double boundary_mass_fraction(const std::vector<cplx>& field, int nx, int ny);

struct SpectralReport {
  int box_nx = 0;
  int box_ny = 0;
  double boundary_fraction = 0.0;
  bool localization_warning = false;  // boundary_fraction > 1e-8
};

/// Single-call form of SpectralPropagator::evolve with the localization check.
std::vector<cplx> spectral_evolve(std::vector<cplx> field, int nx, int ny, double dx, double dy,
                                  const ComponentCoefficients& coeffs, double t,
                                  SpectralReport* report = nullptr);

/// Smallest power of two that is >= n.
int next_pow2(int n);

/// Reference solution on the physical grid: the initial function (in physical
/// coordinates) is sampled on a periodic box with the same spacing and at
/// least `factor` times as many cells per side (power-of-two sizes), evolved to
/// time t, and restricted to the Omega points. One component per coefficient set.
ComplexState spectral_reference(const std::vector<std::function<cplx(double, double)>>& initial,
                                const CnlsCoefficients& coeffs, const DomainLayout& layout,
                                const GridSpec& grid, double t, int factor = 4,
                                SpectralReport* report = nullptr,
                                SpectralSymbol symbol = SpectralSymbol::Exact);

}  // namespace pmlcnls
