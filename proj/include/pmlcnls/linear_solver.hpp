#pragma once

#include <memory>
#include <span>
#include <string_view>

#include "pmlcnls/discretization.hpp"

namespace pmlcnls {

enum class SolverStrategy { Auto, Direct, Krylov };

std::string_view to_string(SolverStrategy s);
SolverStrategy solver_strategy_from_string(std::string_view name);

struct SolverOptions {
  SolverStrategy strategy = SolverStrategy::Auto;
  double tolerance = 1e-10;   // relative residual bound, both modes
  int max_iterations = 2000;  // Krylov only
  /// Auto picks Direct when the grid has at most this many points.
  std::size_t direct_limit = 400 * 400;
};

/// Solver for a fixed complex sparse matrix, factorized or preconditioned once.
class LinearSolver {
 public:
  LinearSolver(const SparseMatrix& a, const SolverOptions& options);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Solves a x = rhs. Throws NumericalError if the relative residual exceeds
  /// the tolerance (after one refinement sweep in direct mode).
  void solve(std::span<const cplx> rhs, std::span<cplx> x) const;

  SolverStrategy strategy() const;
  double last_residual() const;
  int last_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// I - shift * L for the implicit stage equations.
SparseMatrix shifted_identity(const SparseMatrix& l, cplx shift);

}  // namespace pmlcnls
