#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pmlcnls {

using cplx = std::complex<double>;

/// Linear coefficients of one component: alpha_x d_xx + alpha_y d_yy + beta d_xy.
struct ComponentCoefficients {
  double alpha_x = 1.0;
  double alpha_y = 1.0;
  double beta = 0.0;

  /// Mixed coefficient after rescaling both axes to unit second-derivative
  /// coefficients: beta / sqrt(|alpha_x| |alpha_y|).
  double tilde_beta() const;
};

/// Coefficients of the coupled system
///   i u_t + (alpha_x d_xx + alpha_y d_yy + beta d_xy) u_j + gamma N_j(u) = 0.
/// Construction validates ellipticity (alpha_x alpha_y > beta^2, equal signs).
class CnlsCoefficients {
 public:
  CnlsCoefficients(std::vector<double> alpha_x, std::vector<double> alpha_y,
                   std::vector<double> beta, double gamma = 0.0, double eps_q = 0.0);

  static CnlsCoefficients scalar(double alpha_x, double alpha_y, double beta,
                                 double gamma = 0.0, double eps_q = 0.0);

  int n_components() const { return static_cast<int>(alpha_x_.size()); }
  ComponentCoefficients component(int j) const;
  double tilde_beta(int j) const { return component(j).tilde_beta(); }
  double gamma() const { return gamma_; }
  double eps_q() const { return eps_q_; }
  const std::vector<double>& alpha_x() const { return alpha_x_; }
  const std::vector<double>& alpha_y() const { return alpha_y_; }
  const std::vector<double>& beta() const { return beta_; }

  /// Convex combination (1-s)*a + s*b of all coefficients; used by homotopy.
  static CnlsCoefficients interpolate(const CnlsCoefficients& a, const CnlsCoefficients& b,
                                      double s);

  bool operator==(const CnlsCoefficients&) const = default;

 private:
  std::vector<double> alpha_x_;
  std::vector<double> alpha_y_;
  std::vector<double> beta_;
  double gamma_ = 0.0;
  double eps_q_ = 0.0;
};

/// Physical domain [0,lx] x [0,ly] surrounded by layers of width delta_x, delta_y.
struct DomainLayout {
  double lx = 1.0;
  double ly = 1.0;
  double delta_x = 0.0;
  double delta_y = 0.0;

  void validate() const;
  bool operator==(const DomainLayout&) const = default;
};

/// Uniform mesh on the full box [-delta_x, lx+delta_x] x [-delta_y, ly+delta_y].
///
/// Grid points are aligned with the physical domain: x=0 is index layer_x and
/// x=lx is index nx-1-layer_x. Storage index of (ix, iy) is ix*ny + iy.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  int layer_x = 0;  // cells in each x layer
  int layer_y = 0;

  double x(int ix) const { return (ix - layer_x) * dx; }
  double y(int iy) const { return (iy - layer_y) * dy; }
  int omega_nx() const { return nx - 2 * layer_x; }
  int omega_ny() const { return ny - 2 * layer_y; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(iy);
  }
  bool in_omega(int ix, int iy) const {
    return ix >= layer_x && ix < nx - layer_x && iy >= layer_y && iy < ny - layer_y;
  }

  bool operator==(const GridSpec&) const = default;
};

/// Builds an aligned grid with dx = lx/cells_x, dy = ly/cells_y. Layer widths
/// that are not multiples of the mesh width are rounded up; the returned
/// layout carries the adjusted widths.
std::pair<DomainLayout, GridSpec> make_aligned_grid(const DomainLayout& requested, int cells_x,
                                                    int cells_y);

/// Throws ConfigError unless grid and layout satisfy the alignment invariant.
void check_alignment(const DomainLayout& layout, const GridSpec& grid);

/// N-component complex field on the full grid.
class ComplexState {
 public:
  ComplexState() = default;
  ComplexState(DomainLayout layout, GridSpec grid, int n_components);

  const DomainLayout& layout() const { return layout_; }
  const GridSpec& grid() const { return grid_; }
  int n_components() const { return n_components_; }

  std::span<cplx> component(int j);
  std::span<const cplx> component(int j) const;
  cplx& at(int j, int ix, int iy) { return data_[offset(j) + grid_.index(ix, iy)]; }
  const cplx& at(int j, int ix, int iy) const { return data_[offset(j) + grid_.index(ix, iy)]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  bool all_finite() const;
  void fill(cplx value);

 private:
  std::size_t offset(int j) const { return static_cast<std::size_t>(j) * grid_.size(); }

  DomainLayout layout_{};
  GridSpec grid_{};
  int n_components_ = 0;
  std::vector<cplx> data_;
};

/// Layout/grid of the physical domain alone (no layers) for a given full grid.
std::pair<DomainLayout, GridSpec> omega_only(const DomainLayout& layout, const GridSpec& grid);

/// Sub-field on [0,lx] x [0,ly]; values copied bit-for-bit.
ComplexState restrict_to_physical(const ComplexState& state);

/// Places an Omega-only field into a full grid with zeros in the layers.
ComplexState embed_in_layers(const ComplexState& omega_state, const DomainLayout& layout,
                             const GridSpec& grid);

/// sqrt(sum |u|^2 dx dy) over every point of the state and every component.
double l2_norm(const ComplexState& state);

/// Same as l2_norm(restrict_to_physical(state)) without the copy.
double l2_norm_omega(const ComplexState& state);

}  // namespace pmlcnls
