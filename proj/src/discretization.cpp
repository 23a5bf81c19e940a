#include "pmlcnls/discretization.hpp"

#include <algorithm>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/kernels.hpp"

namespace pmlcnls {

StencilSet StencilSet::for_spacing(double d) {
  StencilSet s;
  const double a = 1.0 / (12.0 * d);
  const double b = 1.0 / (12.0 * d * d);
  s.d1 = {a, -8.0 * a, 0.0, 8.0 * a, -a};
  s.d2 = {-b, 16.0 * b, -30.0 * b, 16.0 * b, -b};
  return s;
}

namespace {

std::vector<cplx> apply_line(std::span<const cplx> line, const std::array<double, 5>& w) {
  if (line.size() < 5) throw ConfigError("stencil: line needs at least 5 points");
  std::vector<cplx> out(line.size());
  kernels::active().stencil_line(line.data(), w.data(), out.data(), line.size());
  return out;
}

bool interior(const GridSpec& g, int ix, int iy) {
  return ix >= 1 && ix <= g.nx - 2 && iy >= 1 && iy <= g.ny - 2;
}

}  // namespace

std::vector<cplx> apply_d1(std::span<const cplx> line, double d) {
  return apply_line(line, StencilSet::for_spacing(d).d1);
}

std::vector<cplx> apply_d2(std::span<const cplx> line, double d) {
  return apply_line(line, StencilSet::for_spacing(d).d2);
}

OperatorCoefficients expand_operator(const ComponentCoefficients& coeffs,
                                     const PmlCoefficientFields& f, const GridSpec& grid,
                                     MixedOrdering ordering) {
  if (f.cx.size() != static_cast<std::size_t>(grid.nx) ||
      f.cy.size() != static_cast<std::size_t>(grid.ny)) {
    throw ConfigError("operator: coefficient fields do not match the grid");
  }
  const double ax = coeffs.alpha_x;
  const double ay = coeffs.alpha_y;
  const double be = coeffs.beta;
  double wxy = 0.5;
  double wyx = 0.5;
  if (ordering == MixedOrdering::XThenY) {
    wxy = 1.0;
    wyx = 0.0;
  } else if (ordering == MixedOrdering::YThenX) {
    wxy = 0.0;
    wyx = 1.0;
  }

  OperatorCoefficients o;
  o.nx = grid.nx;
  o.ny = grid.ny;
  const std::size_t n = grid.size();
  o.axx.resize(n);
  o.ayy.resize(n);
  o.axy.resize(n);
  o.bx.resize(n);
  o.by.resize(n);

  for (int ix = 0; ix < grid.nx; ++ix) {
    const cplx c = f.cx[ix], cp = f.dcx[ix], g = f.gx[ix], gp = f.dgx[ix];
    const cplx cg_p = cp * g + c * gp;  // (c g)'
    for (int iy = 0; iy < grid.ny; ++iy) {
      const cplx d = f.cy[iy], dp = f.dcy[iy], h = f.gy[iy], hp = f.dgy[iy];
      const cplx dh_p = dp * h + d * hp;  // (d h)'
      const cplx cd = c * d;

      // Dx^2 and Dy^2
      cplx xx = ax * c * c + ay * d * d * h * h;
      cplx yy = ax * c * c * g * g + ay * d * d;
      cplx xy = -2.0 * ax * c * c * g - 2.0 * ay * d * d * h;
      cplx x1 = ax * c * cp - ay * d * dh_p;
      cplx y1 = -ax * c * cg_p + ay * d * dp;

      // Dx Dy and Dy Dx share their second-order part.
      xx += be * (-cd * h);
      yy += be * (-cd * g);
      xy += be * cd * (1.0 + g * h);
      x1 += be * (wxy * c * g * dh_p - wyx * d * h * cp);
      y1 += be * (-wxy * c * g * dp + wyx * d * h * cg_p);

      const std::size_t k = grid.index(ix, iy);
      o.axx[k] = xx;
      o.ayy[k] = yy;
      o.axy[k] = xy;
      o.bx[k] = x1;
      o.by[k] = y1;
    }
  }
  return o;
}

std::vector<cplx> SparseOperator::apply(std::span<const cplx> v) const {
  if (v.size() != grid.size()) throw ConfigError("operator: field size mismatch");
  Eigen::Map<const Eigen::VectorXcd> in(v.data(), static_cast<Eigen::Index>(v.size()));
  std::vector<cplx> out(v.size());
  Eigen::Map<Eigen::VectorXcd> res(out.data(), static_cast<Eigen::Index>(out.size()));
  res.noalias() = matrix * in;
  return out;
}

namespace {

SparseMatrix assemble_from(const OperatorCoefficients& o, const GridSpec& grid) {
  const StencilSet sx = StencilSet::for_spacing(grid.dx);
  const StencilSet sy = StencilSet::for_spacing(grid.dy);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  SparseMatrix m(n, n);
  Eigen::Matrix<std::ptrdiff_t, Eigen::Dynamic, 1> nnz(n);
  nnz.setZero();
  for (int ix = 1; ix < grid.nx - 1; ++ix) {
    for (int iy = 1; iy < grid.ny - 1; ++iy) nnz(static_cast<std::ptrdiff_t>(grid.index(ix, iy))) = 25;
  }
  m.reserve(nnz);
  for (int ix = 1; ix < grid.nx - 1; ++ix) {
    for (int iy = 1; iy < grid.ny - 1; ++iy) {
      const std::size_t k = grid.index(ix, iy);
      const auto row = static_cast<std::ptrdiff_t>(k);
      for (int p = -2; p <= 2; ++p) {
        for (int q = -2; q <= 2; ++q) {
          if (!interior(grid, ix + p, iy + q)) continue;
          cplx w = o.axy[k] * (sx.d1[p + 2] * sy.d1[q + 2]);
          if (q == 0) w += o.axx[k] * sx.d2[p + 2] + o.bx[k] * sx.d1[p + 2];
          if (p == 0) w += o.ayy[k] * sy.d2[q + 2] + o.by[k] * sy.d1[q + 2];
          if (w == cplx(0.0, 0.0) && !(p == 0 && q == 0)) continue;
          m.insert(row, static_cast<std::ptrdiff_t>(grid.index(ix + p, iy + q))) = w;
        }
      }
    }
  }
  m.makeCompressed();
  return m;
}

enum class Axis { X, Y };

SparseMatrix axis_matrix(const GridSpec& grid, Axis axis, bool second) {
  const StencilSet s = StencilSet::for_spacing(axis == Axis::X ? grid.dx : grid.dy);
  const auto& w = second ? s.d2 : s.d1;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> t;
  t.reserve(grid.size() * 5);
  for (int ix = 1; ix < grid.nx - 1; ++ix) {
    for (int iy = 1; iy < grid.ny - 1; ++iy) {
      const auto row = static_cast<std::ptrdiff_t>(grid.index(ix, iy));
      for (int p = -2; p <= 2; ++p) {
        const int jx = axis == Axis::X ? ix + p : ix;
        const int jy = axis == Axis::Y ? iy + p : iy;
        if (!interior(grid, jx, jy) || w[p + 2] == 0.0) continue;
        t.emplace_back(row, static_cast<std::ptrdiff_t>(grid.index(jx, jy)), cplx(w[p + 2], 0.0));
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

SparseOperator assemble_linear_operator(const ComponentCoefficients& coeffs,
                                        const PmlCoefficientFields& fields, const GridSpec& grid,
                                        MixedOrdering ordering) {
  if (grid.nx < 9 || grid.ny < 9) throw ConfigError("operator: grid too small");
  const OperatorCoefficients o = expand_operator(coeffs, fields, grid, ordering);
  return {grid, assemble_from(o, grid)};
}

SparseOperator assemble_mixed_term(const ComponentCoefficients& coeffs,
                                   const PmlCoefficientFields& fields, const GridSpec& grid,
                                   MixedOrdering ordering) {
  // Same fields, beta dropped from the expansion: the difference is the mixed part.
  ComponentCoefficients no_mix = coeffs;
  no_mix.beta = 0.0;
  OperatorCoefficients full = expand_operator(coeffs, fields, grid, ordering);
  const OperatorCoefficients base = expand_operator(no_mix, fields, grid, ordering);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    full.axx[k] -= base.axx[k];
    full.ayy[k] -= base.ayy[k];
    full.axy[k] -= base.axy[k];
    full.bx[k] -= base.bx[k];
    full.by[k] -= base.by[k];
  }
  return {grid, assemble_from(full, grid)};
}

SparseMatrix d1_matrix_x(const GridSpec& grid) { return axis_matrix(grid, Axis::X, false); }
SparseMatrix d1_matrix_y(const GridSpec& grid) { return axis_matrix(grid, Axis::Y, false); }
SparseMatrix d2_matrix_x(const GridSpec& grid) { return axis_matrix(grid, Axis::X, true); }
SparseMatrix d2_matrix_y(const GridSpec& grid) { return axis_matrix(grid, Axis::Y, true); }

StencilOperator::StencilOperator(const ComponentCoefficients& coeffs,
                                 const PmlCoefficientFields& fields, const GridSpec& grid,
                                 MixedOrdering ordering)
    : grid_(grid),
      c_(expand_operator(coeffs, fields, grid, ordering)),
      sx_(StencilSet::for_spacing(grid.dx)),
      sy_(StencilSet::for_spacing(grid.dy)) {
  const std::size_t n = grid.size();
  v_.resize(n);
  dxx_.resize(n);
  dyy_.resize(n);
  dx_.resize(n);
  dy_.resize(n);
  dxy_.resize(n);
}

void StencilOperator::apply(std::span<const cplx> v, std::span<cplx> out) const {
  const GridSpec& g = grid_;
  if (v.size() != g.size() || out.size() != g.size()) {
    throw ConfigError("stencil operator: field size mismatch");
  }
  const auto& k = kernels::active();
  const auto ny = static_cast<std::size_t>(g.ny);

  std::copy(v.begin(), v.end(), v_.begin());
  std::fill_n(v_.begin(), ny, cplx{});
  std::fill_n(v_.begin() + static_cast<std::ptrdiff_t>(g.index(g.nx - 1, 0)), ny, cplx{});
  for (int ix = 0; ix < g.nx; ++ix) {
    v_[g.index(ix, 0)] = 0.0;
    v_[g.index(ix, g.ny - 1)] = 0.0;
  }

  auto line = [&](const std::vector<cplx>& a, int ix) -> const cplx* {
    return ix < 0 || ix >= g.nx ? nullptr : a.data() + g.index(ix, 0);
  };
  for (int ix = 0; ix < g.nx; ++ix) {
    const cplx* rows[5];
    for (int p = 0; p < 5; ++p) rows[p] = line(v_, ix + p - 2);
    cplx* o = dxx_.data() + g.index(ix, 0);
    k.stencil_rows(rows, sx_.d2.data(), o, ny);
    k.stencil_rows(rows, sx_.d1.data(), dx_.data() + g.index(ix, 0), ny);
    k.stencil_line(v_.data() + g.index(ix, 0), sy_.d2.data(), dyy_.data() + g.index(ix, 0), ny);
    k.stencil_line(v_.data() + g.index(ix, 0), sy_.d1.data(), dy_.data() + g.index(ix, 0), ny);
  }
  for (int ix = 0; ix < g.nx; ++ix) {
    const cplx* rows[5];
    for (int p = 0; p < 5; ++p) rows[p] = line(dy_, ix + p - 2);
    k.stencil_rows(rows, sx_.d1.data(), dxy_.data() + g.index(ix, 0), ny);
  }

  std::fill(out.begin(), out.end(), cplx{});
  for (int ix = 1; ix < g.nx - 1; ++ix) {
    for (int iy = 1; iy < g.ny - 1; ++iy) {
      const std::size_t i = g.index(ix, iy);
      out[i] = c_.axx[i] * dxx_[i] + c_.ayy[i] * dyy_[i] + c_.axy[i] * dxy_[i] +
               c_.bx[i] * dx_[i] + c_.by[i] * dy_[i];
    }
  }
}

}  // namespace pmlcnls
