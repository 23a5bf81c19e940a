#pragma once

// Stationary solitary waves e^{-it} phi of the coupled system, i.e. real
// positive solutions of  L_j phi_j - phi_j + gamma N_j(phi) = 0  on Omega with
// zero Dirichlet data.

#include <stdexcept>
#include <vector>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/model.hpp"

namespace pmlcnls {

struct ShootingOptions {
  double r_max = 20.0;
  double r_start = 1e-8;       // series start near the origin
  double bisection_tol = 1e-13;  // on phi(0)
  double ode_abs_tol = 1e-12;
  double ode_rel_tol = 1e-12;
  double sample_dr = 0.005;
};

/// Nodeless radial solution of  phi'' + phi'/r - phi + c3 phi^3 + c5 phi^5 = 0.
struct RadialProfile {
  double c3 = 0.0;
  double c5 = 0.0;
  double phi0 = 0.0;
  double power = 0.0;  // 2 pi int phi^2 r dr
  double r_cut = 0.0;  // beyond this the tail is the exponential continuation
  std::vector<double> r, phi, dphi;

  /// Hermite interpolation on the samples; exponential tail beyond r_cut.
  double operator()(double radius) const;
};

/// Bisection on phi(0) between profiles that turn upward while positive
/// (too small) and profiles that cross zero (too large). Throws ConfigError
/// for c3 <= 0 and NumericalError when no bracket is found.
RadialProfile shoot_radial_ground_state(double c3, double c5, const ShootingOptions& options = {});

/// Ground state on an Omega-only grid (no layers; boundary values are zero).
struct GroundState {
  CnlsCoefficients coeffs;
  ComplexState phi;
  double residual = 0.0;  // stationary residual, discrete L2
};

/// Places the radial profile at the centre of the grid in every component and
/// zeroes the outer boundary.
GroundState ground_state_from_radial(const RadialProfile& profile, const CnlsCoefficients& coeffs,
                                     const DomainLayout& omega, const GridSpec& omega_grid);

/// sqrt(sum |L phi - phi + gamma N(phi)|^2 dx dy) with the CME2 nonlinearity.
double stationary_residual(const ComplexState& phi, const CnlsCoefficients& coeffs);

struct ContinuationOptions {
  int steps = 10;
  double tol = 1e-10;
  int max_newton = 30;
  int max_halvings = 6;  // step halvings after a failed Newton solve
};

struct NewtonRecord {
  double s = 0.0;                 // homotopy parameter
  std::vector<double> residuals;  // before each update and after the last
  double min_value = 0.0;
};

struct ContinuationResult {
  GroundState state;
  std::vector<NewtonRecord> history;
};

/// Raised when Newton fails at some homotopy step.
class ContinuationError : public NumericalError {
 public:
  ContinuationError(const std::string& what, double last_converged_s)
      : NumericalError(what), last_converged_s_(last_converged_s) {}
  double last_converged_s() const { return last_converged_s_; }

 private:
  double last_converged_s_;
};

/// Linear homotopy in all coefficients from start.coeffs to target with Newton
/// at every step, warm-started from the previous solution. Unknowns are real:
/// the Jacobian of the real restriction of the CME2 nonlinearity is exact there
/// and removes the phase invariance. Throws ConfigError when steps < 1 and the
/// coefficients differ.
ContinuationResult continue_ground_state(const GroundState& start, const CnlsCoefficients& target,
                                         const ContinuationOptions& options = {});

/// Radial start with alpha = 1, beta = 0 for gamma, eps_q of target, then
/// continuation to target on the given grid.
ContinuationResult compute_ground_state(const CnlsCoefficients& target, const DomainLayout& omega,
                                        const GridSpec& omega_grid,
                                        const ContinuationOptions& options = {},
                                        const ShootingOptions& shooting = {});

}  // namespace pmlcnls
