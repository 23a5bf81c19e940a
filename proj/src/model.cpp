#include "pmlcnls/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/kernels.hpp"

namespace pmlcnls {

double ComponentCoefficients::tilde_beta() const {
  return beta / std::sqrt(std::abs(alpha_x) * std::abs(alpha_y));
}

CnlsCoefficients::CnlsCoefficients(std::vector<double> alpha_x, std::vector<double> alpha_y,
                                   std::vector<double> beta, double gamma, double eps_q)
    : alpha_x_(std::move(alpha_x)),
      alpha_y_(std::move(alpha_y)),
      beta_(std::move(beta)),
      gamma_(gamma),
      eps_q_(eps_q) {
  if (alpha_x_.empty()) throw ConfigError("coefficients: at least one component required");
  if (alpha_y_.size() != alpha_x_.size() || beta_.size() != alpha_x_.size()) {
    throw ConfigError("coefficients: alpha_x, alpha_y and beta must have the same length");
  }
  for (std::size_t j = 0; j < alpha_x_.size(); ++j) {
    const double ax = alpha_x_[j];
    const double ay = alpha_y_[j];
    const double b = beta_[j];
    if (!std::isfinite(ax) || !std::isfinite(ay) || !std::isfinite(b)) {
      throw ConfigError("coefficients: non-finite value in component " + std::to_string(j + 1));
    }
    if (!(ax * ay > b * b)) {
      std::ostringstream msg;
      msg << "coefficients: component " << j + 1 << " violates alpha_x*alpha_y > beta^2 (" << ax
          << "*" << ay << " <= " << b << "^2)";
      throw ConfigError(msg.str());
    }
    // ax*ay > b^2 >= 0 already forces equal signs; kept explicit for clarity of the error.
    if ((ax > 0) != (ay > 0)) {
      throw ConfigError("coefficients: alpha_x and alpha_y must share a sign in component " +
                        std::to_string(j + 1));
    }
  }
  if (!std::isfinite(gamma_) || !std::isfinite(eps_q_)) {
    throw ConfigError("coefficients: gamma and eps_q must be finite");
  }
}

CnlsCoefficients CnlsCoefficients::scalar(double alpha_x, double alpha_y, double beta,
                                          double gamma, double eps_q) {
  return CnlsCoefficients({alpha_x}, {alpha_y}, {beta}, gamma, eps_q);
}

ComponentCoefficients CnlsCoefficients::component(int j) const {
  const auto k = static_cast<std::size_t>(j);
  return {alpha_x_.at(k), alpha_y_.at(k), beta_.at(k)};
}

CnlsCoefficients CnlsCoefficients::interpolate(const CnlsCoefficients& a,
                                               const CnlsCoefficients& b, double s) {
  if (a.n_components() != b.n_components()) {
    throw ConfigError("coefficients: cannot interpolate systems of different size");
  }
  auto mix = [s](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> w(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) w[k] = (1.0 - s) * u[k] + s * v[k];
    return w;
  };
  return CnlsCoefficients(mix(a.alpha_x_, b.alpha_x_), mix(a.alpha_y_, b.alpha_y_),
                          mix(a.beta_, b.beta_), (1.0 - s) * a.gamma_ + s * b.gamma_,
                          (1.0 - s) * a.eps_q_ + s * b.eps_q_);
}

void DomainLayout::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("domain: lx and ly must be positive");
  if (!(delta_x >= 0.0) || !(delta_y >= 0.0)) {
    throw ConfigError("domain: layer widths must be non-negative");
  }
}

namespace {

int layer_cells(double delta, double d) {
  const double ratio = delta / d;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

}  // namespace

std::pair<DomainLayout, GridSpec> make_aligned_grid(const DomainLayout& requested, int cells_x,
                                                    int cells_y) {
  requested.validate();
  if (cells_x < 1 || cells_y < 1) throw ConfigError("grid: cell counts must be positive");
  GridSpec g;
  g.dx = requested.lx / cells_x;
  g.dy = requested.ly / cells_y;
  g.layer_x = layer_cells(requested.delta_x, g.dx);
  g.layer_y = layer_cells(requested.delta_y, g.dy);
  g.nx = cells_x + 1 + 2 * g.layer_x;
  g.ny = cells_y + 1 + 2 * g.layer_y;
  if (g.nx < 9 || g.ny < 9) throw ConfigError("grid: at least 9 points per direction required");
  DomainLayout layout = requested;
  layout.delta_x = g.layer_x * g.dx;
  layout.delta_y = g.layer_y * g.dy;
  return {layout, g};
}

void check_alignment(const DomainLayout& layout, const GridSpec& grid) {
  layout.validate();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  const int cells_x = grid.nx - 1 - 2 * grid.layer_x;
  const int cells_y = grid.ny - 1 - 2 * grid.layer_y;
  if (grid.nx < 9 || grid.ny < 9 || cells_x < 1 || cells_y < 1 || !close(cells_x * grid.dx, layout.lx) ||
      !close(cells_y * grid.dy, layout.ly) || !close(grid.layer_x * grid.dx, layout.delta_x) ||
      !close(grid.layer_y * grid.dy, layout.delta_y)) {
    throw ConfigError("grid is not aligned with the physical domain boundary");
  }
}

ComplexState::ComplexState(DomainLayout layout, GridSpec grid, int n_components)
    : layout_(layout), grid_(grid), n_components_(n_components) {
  if (n_components < 1) throw ConfigError("state: at least one component required");
  data_.assign(grid_.size() * static_cast<std::size_t>(n_components), cplx(0.0, 0.0));
}

std::span<cplx> ComplexState::component(int j) {
  return {data_.data() + offset(j), grid_.size()};
}

std::span<const cplx> ComplexState::component(int j) const {
  return {data_.data() + offset(j), grid_.size()};
}

bool ComplexState::all_finite() const {
  return std::isfinite(kernels::active().norm_sq(data_.data(), data_.size()));
}

void ComplexState::fill(cplx value) { std::fill(data_.begin(), data_.end(), value); }

std::pair<DomainLayout, GridSpec> omega_only(const DomainLayout& layout, const GridSpec& grid) {
  check_alignment(layout, grid);
  DomainLayout l = layout;
  l.delta_x = 0.0;
  l.delta_y = 0.0;
  GridSpec g = grid;
  g.nx = grid.omega_nx();
  g.ny = grid.omega_ny();
  g.layer_x = 0;
  g.layer_y = 0;
  return {l, g};
}

ComplexState restrict_to_physical(const ComplexState& state) {
  const auto [layout, grid] = omega_only(state.layout(), state.grid());
  ComplexState out(layout, grid, state.n_components());
  const GridSpec& src = state.grid();
  for (int j = 0; j < state.n_components(); ++j) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const cplx* from = &state.at(j, ix + src.layer_x, src.layer_y);
      std::copy(from, from + grid.ny, &out.at(j, ix, 0));
    }
  }
  return out;
}

ComplexState embed_in_layers(const ComplexState& omega_state, const DomainLayout& layout,
                             const GridSpec& grid) {
  check_alignment(layout, grid);
  const GridSpec& src = omega_state.grid();
  if (src.layer_x != 0 || src.layer_y != 0 || src.nx != grid.omega_nx() ||
      src.ny != grid.omega_ny() || std::abs(src.dx - grid.dx) > 1e-12 * grid.dx ||
      std::abs(src.dy - grid.dy) > 1e-12 * grid.dy) {
    throw ConfigError("embed: Omega field does not match the target grid");
  }
  ComplexState out(layout, grid, omega_state.n_components());
  for (int j = 0; j < omega_state.n_components(); ++j) {
    for (int ix = 0; ix < src.nx; ++ix) {
      const cplx* from = &omega_state.at(j, ix, 0);
      std::copy(from, from + src.ny, &out.at(j, ix + grid.layer_x, grid.layer_y));
    }
  }
  return out;
}

double l2_norm(const ComplexState& state) {
  const auto& d = state.data();
  return std::sqrt(kernels::active().norm_sq(d.data(), d.size()) * state.grid().dx *
                   state.grid().dy);
}

double l2_norm_omega(const ComplexState& state) {
  const GridSpec& g = state.grid();
  const auto& k = kernels::active();
  double s = 0.0;
  for (int j = 0; j < state.n_components(); ++j) {
    for (int ix = g.layer_x; ix < g.nx - g.layer_x; ++ix) {
      s += k.norm_sq(&state.at(j, ix, g.layer_y), static_cast<std::size_t>(g.omega_ny()));
    }
  }
  return std::sqrt(s * g.dx * g.dy);
}

}  // namespace pmlcnls
