#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

struct PmlParameters {
  double rho = std::numbers::pi / 4.0;
  double hx = 0.0;
  double hy = 0.0;

  void validate() const;
};

/// Two-bracket tanh profile with steepness a = 12/delta and smoothing factor 6.
/// Zero on [0, length]; outside [-delta, length + delta] the value is clamped
/// to the one at the nearest end of the box.
double sigma_eval(double h, double length, double delta, double x);

/// d sigma / dx of sigma_eval (zero on [0, length] and in the clamped region).
double sigma_derivative(double h, double length, double delta, double x);

/// Maximum over the right layer, sampled at `samples` points (>= 1000).
double max_sigma(double h, double length, double delta, int samples = 4001);

/// sigma_x, sigma_y sampled on the grid lines, with their x/y derivatives.
struct AbsorptionProfile {
  std::vector<double> sigma_x, dsigma_x;  // size nx
  std::vector<double> sigma_y, dsigma_y;  // size ny
  double max_x = 0.0;
  double max_y = 0.0;

  /// Profile with sigma_x, sigma_y constant over the whole grid.
  static AbsorptionProfile constant(const GridSpec& grid, double sigma_x, double sigma_y);
};

struct StabilityReport {
  double max_sigma_x = 0.0;
  double max_sigma_y = 0.0;
  double threshold = 0.0;  // +inf when all beta_j vanish
  bool stable = true;
  std::string message;
};

AbsorptionProfile build_profiles(const DomainLayout& layout, const GridSpec& grid,
                                 const PmlParameters& pml);

/// Compares max sigma against the system threshold. Exceeding it is reported
/// through the log as a warning, not an error.
StabilityReport check_stability(const AbsorptionProfile& profile, const CnlsCoefficients& coeffs);

/// Coefficients of the stretched derivatives of one component
///   Dx = cx (d_x - gx d_y),  cx = 1/(1 + e^{i rho} sigma_x),  gx = e^{i rho} beta sigma_x / (2 alpha_x)
///   Dy = cy (d_y - gy d_x),  cy = 1/(1 + e^{i rho} sigma_y),  gy = e^{i rho} beta sigma_y / (2 alpha_y)
/// together with their derivatives along the respective axis.
struct PmlCoefficientFields {
  std::vector<cplx> cx, dcx, gx, dgx;  // size nx
  std::vector<cplx> cy, dcy, gy, dgy;  // size ny
};

PmlCoefficientFields build_coefficient_fields(const AbsorptionProfile& profile,
                                              const ComponentCoefficients& coeffs, double rho);

std::vector<PmlCoefficientFields> build_coefficient_fields(const AbsorptionProfile& profile,
                                                           const CnlsCoefficients& coeffs,
                                                           double rho);

}  // namespace pmlcnls
