#pragma once

// Laplace-Fourier analysis of the linear layer equations: dispersion, modal
// exponents, damping of the stretched modes, layer stability symbols and
// thresholds, and the change of variables that removes mixed derivatives.

#include <array>
#include <optional>
#include <vector>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

struct DispersionPoint {
  double kx = 0.0;
  double ky = 0.0;
  double omega = 0.0;
  double vg = 0.0;
  std::optional<double> vp;  // empty for kx == 0
};

/// omega = ax kx^2 + ay ky^2 + b kx ky, vg = 2 ax kx + b ky, vp = omega / kx.
DispersionPoint dispersion(const ComponentCoefficients& c, double kx, double ky);

struct ModalPoint {
  cplx s;
  double ky = 0.0;
  cplx lambda1;  // Re >= 0 for Re(s) >= 0
  cplx lambda2;  // Re <= 0
};

/// Roots of ax l^2 + i b ky l + (i s - ay ky^2) = 0.
///
/// Principal square root; labels by real part. Exact ties (Re(s) = 0, purely
/// propagating modes) are resolved by the limit Re(s) -> 0+, which is what
/// separates right- and left-going modes.
ModalPoint modal_lambdas(const ComponentCoefficients& c, cplx s, double ky);

/// Fixed point -i b ky / (2 ax) of the PML shift.
cplx rotation_center(const ComponentCoefficients& c, double ky);

/// lambda + (lambda + i b ky / (2 ax)) e^{i rho} sigma
cplx pml_shifted_lambda(cplx lambda, const ComponentCoefficients& c, double ky, double rho,
                        double sigma);

struct StabilitySymbol {
  double kx = 0.0;
  double ky = 0.0;
  cplx nu;  // d/dt u_hat = nu u_hat
};

/// Constant-sigma corner-layer symbol of the scaled equation (ax = ay = 1,
/// mixed coefficient tilde_beta).
StabilitySymbol corner_symbol(double tilde_beta, double sigma_x, double sigma_y, double rho,
                              double kx, double ky);

/// Re(nu) in closed form for sigma_x = sigma_y = sigma and rho = pi/4.
double corner_symbol_re_closed_form(double tilde_beta, double sigma, double kx, double ky);

/// Side-layer (sigma_y = 0) symbol obtained by composing the stretched
/// derivative symbols.
StabilitySymbol side_symbol(double tilde_beta, double sigma, double rho, double kx, double ky);

/// -sigma (sqrt2 + sigma) / (sigma^2 + sqrt2 sigma + 1)^2 (2 kx + tilde_beta ky)^2.
///
/// Equals 4 Re(side_symbol(..., pi/4, ...).nu); the sign, which is all the
/// stability statement uses, is the same.
double side_symbol_re_closed_form(double tilde_beta, double sigma, double kx, double ky);

/// D(sigma) = b^2 s^4 + sqrt2 s (b^2 s^2 - 4) + (b^2/2 - 2) s^2 - 4 with b = tilde_beta.
double stability_polynomial(double tilde_beta, double sigma);

/// The four closed-form roots sigma_1..4 of D. tilde_beta must be nonzero;
/// no domain check, so |tilde_beta| >= 1 is allowed for formula testing.
/// Roots with a negative discriminant are returned as NaN.
std::array<double, 4> stability_roots(double tilde_beta);

/// Largest stable constant sigma: sigma_1(|tilde_beta|). +inf for tilde_beta == 0.
/// Throws ConfigError for |tilde_beta| >= 1.
double threshold_sigma1(double tilde_beta);

/// threshold_sigma1(max_j |tilde_beta_j|); +inf when every beta_j is zero.
double system_threshold(const CnlsCoefficients& coeffs);

struct TransformParams {
  double a = 1.0;
  double b = 1.0;
  double theta = 0.0;
  std::vector<ComponentCoefficients> transformed;
};

/// Coefficients of one component after the rotation/scaling
///   x~ = a cos(t) x - b sin(t) y,  y~ = a sin(t) x + b cos(t) y.
ComponentCoefficients transform_component(const ComponentCoefficients& c, double a, double b,
                                          double theta);

/// Finds (a, b, theta) with b = 1 that make every mixed coefficient vanish,
/// or nullopt when no real choice exists. ratio_tol is the relative tolerance
/// for equality of coefficient ratios; tol bounds the residual mixed
/// coefficients after the transform.
std::optional<TransformParams> find_removal_transform(const CnlsCoefficients& coeffs,
                                                      double tol = 1e-10,
                                                      double ratio_tol = 1e-12);

}  // namespace pmlcnls
