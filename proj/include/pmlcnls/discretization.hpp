#pragma once

// Fourth-order finite differences for the layered operator
//   L_j = ax Dx^2 + ay Dy^2 + b/2 (Dx Dy + Dy Dx)
// on the full grid with zero Dirichlet data at the outer boundary and two
// zero ghost points beyond it. The time derivative of the linear part is i L u.

#include <array>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "pmlcnls/model.hpp"
#include "pmlcnls/pml.hpp"

namespace pmlcnls {

struct StencilSet {
  std::array<double, 5> d1;  // (1, -8, 0, 8, -1) / (12 d)
  std::array<double, 5> d2;  // (-1, 16, -30, 16, -1) / (12 d^2)

  static StencilSet for_spacing(double d);
};

/// Derivatives along a contiguous line with zero ghosts. Throws ConfigError if
/// the line has fewer than 5 points.
std::vector<cplx> apply_d1(std::span<const cplx> line, double d);
std::vector<cplx> apply_d2(std::span<const cplx> line, double d);

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;

enum class MixedOrdering { Symmetrized, XThenY, YThenX };

/// Pointwise coefficients of the expanded operator
///   L = axx D2x + ayy D2y + axy D1x D1y + bx D1x + by D1y.
/// Products of the stretched first-order factors are expanded exactly with the
/// coefficient derivatives taken analytically, so the pure second derivatives
/// use the five-point second-difference stencil.
struct OperatorCoefficients {
  int nx = 0;
  int ny = 0;
  std::vector<cplx> axx, ayy, axy, bx, by;  // size nx*ny, index ix*ny+iy
};

OperatorCoefficients expand_operator(const ComponentCoefficients& coeffs,
                                     const PmlCoefficientFields& fields, const GridSpec& grid,
                                     MixedOrdering ordering = MixedOrdering::Symmetrized);

/// Linear operator of one component. Rows and columns of outer-boundary points
/// are empty.
struct SparseOperator {
  GridSpec grid;
  SparseMatrix matrix;

  std::vector<cplx> apply(std::span<const cplx> v) const;
};

SparseOperator assemble_linear_operator(const ComponentCoefficients& coeffs,
                                        const PmlCoefficientFields& fields, const GridSpec& grid,
                                        MixedOrdering ordering = MixedOrdering::Symmetrized);

/// Only the mixed contribution b * (mixed product), for the ordering tests.
SparseOperator assemble_mixed_term(const ComponentCoefficients& coeffs,
                                   const PmlCoefficientFields& fields, const GridSpec& grid,
                                   MixedOrdering ordering);

/// First-difference matrices along x and y with the same boundary treatment.
SparseMatrix d1_matrix_x(const GridSpec& grid);
SparseMatrix d1_matrix_y(const GridSpec& grid);
/// Second-difference matrices along x and y.
SparseMatrix d2_matrix_x(const GridSpec& grid);
SparseMatrix d2_matrix_y(const GridSpec& grid);

/// Matrix-free evaluation of the same operator through the line/row stencil
/// kernels. Independent of the sparse assembly.
class StencilOperator {
 public:
  StencilOperator(const ComponentCoefficients& coeffs, const PmlCoefficientFields& fields,
                  const GridSpec& grid, MixedOrdering ordering = MixedOrdering::Symmetrized);

  void apply(std::span<const cplx> v, std::span<cplx> out) const;
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  OperatorCoefficients c_;
  StencilSet sx_, sy_;
  mutable std::vector<cplx> v_, dxx_, dyy_, dx_, dy_, dxy_;
};

}  // namespace pmlcnls
