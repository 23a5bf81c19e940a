#include "pmlcnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmlcnls/errors.hpp"

namespace pmlcnls {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr cplx kI{0.0, 1.0};

}  // namespace

DispersionPoint dispersion(const ComponentCoefficients& c, double kx, double ky) {
  DispersionPoint p;
  p.kx = kx;
  p.ky = ky;
  p.omega = c.alpha_x * kx * kx + c.alpha_y * ky * ky + c.beta * kx * ky;
  p.vg = 2.0 * c.alpha_x * kx + c.beta * ky;
  if (kx != 0.0) p.vp = p.omega / kx;
  return p;
}

ModalPoint modal_lambdas(const ComponentCoefficients& c, cplx s, double ky) {
  if (c.alpha_x == 0.0) throw ConfigError("modal_lambdas: alpha_x must be nonzero");
  const double ax = c.alpha_x;
  const cplx disc = -c.beta * c.beta * ky * ky - 4.0 * ax * (kI * s - c.alpha_y * ky * ky);
  const cplx r = std::sqrt(disc);
  const cplx head = -kI * c.beta * ky;
  const cplx plus = (head + r) / (2.0 * ax);
  const cplx minus = (head - r) / (2.0 * ax);

  // Re(plus) - Re(minus) = Re(r)/ax. When it vanishes, d(plus)/ds = -i/r, so
  // pushing s to the right moves Re(plus) by Im(1/r).
  bool plus_first;
  const double scale = std::abs(r) + std::abs(head) + 1e-300;
  if (std::abs(r.real()) > 1e-14 * scale) {
    plus_first = plus.real() > minus.real();
  } else {
    plus_first = (1.0 / r).imag() >= 0.0;
  }
  ModalPoint m;
  m.s = s;
  m.ky = ky;
  m.lambda1 = plus_first ? plus : minus;
  m.lambda2 = plus_first ? minus : plus;
  return m;
}

cplx rotation_center(const ComponentCoefficients& c, double ky) {
  return -kI * c.beta * ky / (2.0 * c.alpha_x);
}

cplx pml_shifted_lambda(cplx lambda, const ComponentCoefficients& c, double ky, double rho,
                        double sigma) {
  return lambda + (lambda - rotation_center(c, ky)) * std::polar(1.0, rho) * sigma;
}

StabilitySymbol corner_symbol(double tilde_beta, double sigma_x, double sigma_y, double rho,
                              double kx, double ky) {
  const double b = tilde_beta;
  const cplx e = std::polar(1.0, rho);
  const cplx e2 = e * e;
  const cplx mx = 1.0 + e * sigma_x;
  const cplx my = 1.0 + e * sigma_y;
  const cplx xx = 1.0 / (mx * mx) + b * b * e2 * sigma_y * sigma_y / (4.0 * my * my) -
                  b * b * e * sigma_y / (2.0 * mx * my);
  const cplx yy = 1.0 / (my * my) + b * b * e2 * sigma_x * sigma_x / (4.0 * mx * mx) -
                  b * b * e * sigma_x / (2.0 * mx * my);
  const cplx xy = e * sigma_x / (mx * mx) + e * sigma_y / (my * my) -
                  (4.0 + e2 * b * b * sigma_x * sigma_y) / (4.0 * mx * my);
  return {kx, ky, -kI * (kx * kx * xx + ky * ky * yy - b * kx * ky * xy)};
}

double corner_symbol_re_closed_form(double tilde_beta, double sigma, double kx, double ky) {
  const double b2 = tilde_beta * tilde_beta;
  const double s = sigma;
  const double q = s * s + kSqrt2 * s + 1.0;
  const double radial = 2.0 * kSqrt2 * b2 * s * s + s * (b2 - 4.0) - kSqrt2 * (b2 + 4.0);
  const double cross = tilde_beta * (kSqrt2 * s * s * (b2 + 4.0) + s * (b2 - 4.0) - 8.0 * kSqrt2);
  return s / (4.0 * q * q) * ((kx * kx + ky * ky) * radial + kx * ky * cross);
}

StabilitySymbol side_symbol(double tilde_beta, double sigma, double rho, double kx, double ky) {
  const cplx e = std::polar(1.0, rho);
  const cplx kx_pml = (kx - e * tilde_beta * sigma * ky / 2.0) / (1.0 + e * sigma);
  return {kx, ky, -kI * (kx_pml * kx_pml + ky * ky + tilde_beta * kx_pml * ky)};
}

double side_symbol_re_closed_form(double tilde_beta, double sigma, double kx, double ky) {
  const double q = sigma * sigma + kSqrt2 * sigma + 1.0;
  const double k = 2.0 * kx + tilde_beta * ky;
  return -sigma * (kSqrt2 + sigma) / (q * q) * k * k;
}

double stability_polynomial(double tilde_beta, double sigma) {
  const double b2 = tilde_beta * tilde_beta;
  const double s = sigma;
  return b2 * s * s * s * s + kSqrt2 * s * (b2 * s * s - 4.0) + (b2 / 2.0 - 2.0) * s * s - 4.0;
}

std::array<double, 4> stability_roots(double tilde_beta) {
  const double b = tilde_beta;
  if (b == 0.0) throw ConfigError("stability_roots: tilde_beta must be nonzero");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double d12 = b * b + 12.0 * b + 4.0;
  const double d34 = b * b - 12.0 * b + 4.0;
  const double f = kSqrt2 / (4.0 * b);
  std::array<double, 4> r{nan, nan, nan, nan};
  if (d12 >= 0.0) {
    r[0] = f * (2.0 - b + std::sqrt(d12));
    r[1] = f * (2.0 - b - std::sqrt(d12));
  }
  if (d34 >= 0.0) {
    r[2] = -f * (2.0 + b + std::sqrt(d34));
    r[3] = -f * (2.0 + b - std::sqrt(d34));
  }
  return r;
}

double threshold_sigma1(double tilde_beta) {
  if (!std::isfinite(tilde_beta) || std::abs(tilde_beta) >= 1.0) {
    throw ConfigError("threshold_sigma1: |tilde_beta| must be < 1");
  }
  if (tilde_beta == 0.0) return std::numeric_limits<double>::infinity();
  return stability_roots(std::abs(tilde_beta))[0];
}

double system_threshold(const CnlsCoefficients& coeffs) {
  double worst = 0.0;
  for (int j = 0; j < coeffs.n_components(); ++j) {
    worst = std::max(worst, std::abs(coeffs.tilde_beta(j)));
  }
  return threshold_sigma1(worst);
}

ComponentCoefficients transform_component(const ComponentCoefficients& c, double a, double b,
                                          double theta) {
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  ComponentCoefficients t;
  t.alpha_x = c.alpha_x * a * a * cs * cs + c.alpha_y * b * b * sn * sn - c.beta * a * b / 2.0 * s2;
  t.alpha_y = c.alpha_x * a * a * sn * sn + c.alpha_y * b * b * cs * cs + c.beta * a * b / 2.0 * s2;
  t.beta = (c.alpha_x * a * a - c.alpha_y * b * b) * s2 + c.beta * a * b * c2;
  return t;
}

namespace {

bool nearly_equal(double u, double v, double rel) {
  return std::abs(u - v) <= rel * std::max(std::abs(u), std::abs(v));
}

std::optional<TransformParams> verified(const CnlsCoefficients& coeffs, double a, double theta,
                                        double tol) {
  TransformParams p;
  p.a = a;
  p.b = 1.0;
  p.theta = theta;
  for (int j = 0; j < coeffs.n_components(); ++j) {
    p.transformed.push_back(transform_component(coeffs.component(j), a, 1.0, theta));
    if (!(std::abs(p.transformed.back().beta) < tol)) return std::nullopt;
  }
  return p;
}

}  // namespace

std::optional<TransformParams> find_removal_transform(const CnlsCoefficients& coeffs, double tol,
                                                      double ratio_tol) {
  const int n = coeffs.n_components();
  const auto& ax = coeffs.alpha_x();
  const auto& ay = coeffs.alpha_y();
  const auto& be = coeffs.beta();

  if (std::all_of(be.begin(), be.end(), [](double v) { return v == 0.0; })) {
    return verified(coeffs, 1.0, 0.0, tol);
  }

  bool equal_ratios = true;
  for (int j = 1; j < n; ++j) {
    equal_ratios = equal_ratios && nearly_equal(ax[j] / ay[j], ax[0] / ay[0], ratio_tol);
  }
  if (equal_ratios) {
    // ax a^2 = ay b^2 for every component; theta = pi/4 kills the remaining beta cos(2 theta).
    return verified(coeffs, std::sqrt(ay[0] / ax[0]), std::numbers::pi / 4.0, tol);
  }

  // With b = 1 and A = a^2, equal ratios beta_j / (ax_j A - ay_j) for components 1, 2 read
  // A (b1 ax2 - b2 ax1) = b1 ay2 - b2 ay1.
  const double lhs = be[0] * ax[1] - be[1] * ax[0];
  const double rhs = be[0] * ay[1] - be[1] * ay[0];
  const bool lhs_zero = std::abs(lhs) <= ratio_tol * (std::abs(be[0] * ax[1]) + std::abs(be[1] * ax[0]));
  const bool rhs_zero = std::abs(rhs) <= ratio_tol * (std::abs(be[0] * ay[1]) + std::abs(be[1] * ay[0]));
  double big_a;
  if (lhs_zero) {
    if (!rhs_zero) return std::nullopt;
    big_a = 1.0;
  } else {
    big_a = rhs / lhs;
  }
  if (!(big_a > 0.0) || !std::isfinite(big_a)) return std::nullopt;
  const double a = std::sqrt(big_a);

  double theta = std::numbers::pi / 4.0;
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    const double den = ax[j] * big_a - ay[j];
    if (std::abs(den) > best) {
      best = std::abs(den);
      theta = -0.5 * std::atan(be[j] * a / den);
    }
  }
  return verified(coeffs, a, theta, tol);
}

}  // namespace pmlcnls
