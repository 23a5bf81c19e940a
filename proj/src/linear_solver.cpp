#include "pmlcnls/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/UmfPackSupport>
#include <sstream>
#include <string>

#include "pmlcnls/errors.hpp"

namespace pmlcnls {

std::string_view to_string(SolverStrategy s) {
  switch (s) {
    case SolverStrategy::Auto:
      return "auto";
    case SolverStrategy::Direct:
      return "direct";
    case SolverStrategy::Krylov:
      return "krylov";
  }
  return "auto";
}

SolverStrategy solver_strategy_from_string(std::string_view name) {
  if (name == "auto") return SolverStrategy::Auto;
  if (name == "direct") return SolverStrategy::Direct;
  if (name == "krylov") return SolverStrategy::Krylov;
  throw ConfigError("unknown solver strategy '" + std::string(name) + "'");
}

namespace {

using ColMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXcd;

}  // namespace

struct LinearSolver::Impl {
  SolverOptions options;
  SolverStrategy strategy = SolverStrategy::Direct;
  SparseMatrix a;  // row-major copy for residuals
  ColMatrix col;   // referenced by the UMFPACK factorization
  std::unique_ptr<Eigen::UmfPackLU<ColMatrix>> lu;
  std::unique_ptr<Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<cplx, std::ptrdiff_t>>> krylov;
  mutable double residual = 0.0;
  mutable int iterations = 0;
};

LinearSolver::LinearSolver(const SparseMatrix& a, const SolverOptions& options)
    : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw ConfigError("linear solver: matrix must be square");
  impl_->options = options;
  impl_->a = a;
  SolverStrategy s = options.strategy;
  if (s == SolverStrategy::Auto) {
    s = static_cast<std::size_t>(a.rows()) <= options.direct_limit ? SolverStrategy::Direct
                                                                   : SolverStrategy::Krylov;
  }
  impl_->strategy = s;
  if (s == SolverStrategy::Direct) {
    impl_->col = a.cast<cplx>();
    auto& col = impl_->col;
    col.makeCompressed();
    impl_->lu = std::make_unique<Eigen::UmfPackLU<ColMatrix>>();
    // METIS ordering and no refinement: the stencil pattern factors several
    // times faster this way; residuals are checked after each solve anyway.
    impl_->lu->umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
    impl_->lu->umfpackControl()(UMFPACK_IRSTEP) = 0;
    impl_->lu->compute(col);
    if (impl_->lu->info() != Eigen::Success) {
      throw NumericalError("linear solver: sparse LU factorization failed");
    }
  } else {
    impl_->krylov = std::make_unique<
        Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<cplx, std::ptrdiff_t>>>();
    impl_->krylov->preconditioner().setDroptol(1e-3);
    impl_->krylov->preconditioner().setFillfactor(2);
    impl_->krylov->setTolerance(options.tolerance * 0.1);
    impl_->krylov->setMaxIterations(options.max_iterations);
    impl_->krylov->compute(impl_->a);
    if (impl_->krylov->info() != Eigen::Success) {
      throw NumericalError("linear solver: preconditioner setup failed");
    }
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::solve(std::span<const cplx> rhs, std::span<cplx> x) const {
  const auto n = impl_->a.rows();
  if (static_cast<Eigen::Index>(rhs.size()) != n || static_cast<Eigen::Index>(x.size()) != n) {
    throw ConfigError("linear solver: vector size mismatch");
  }
  Eigen::Map<const Vec> b(rhs.data(), n);
  Eigen::Map<Vec> out(x.data(), n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.setZero();
    impl_->residual = 0.0;
    impl_->iterations = 0;
    return;
  }
  if (impl_->strategy == SolverStrategy::Direct) {
    out = impl_->lu->solve(b);
    Vec r = b - impl_->a * out;
    impl_->residual = r.norm() / bnorm;
    impl_->iterations = 1;
    if (impl_->residual > impl_->options.tolerance) {
      out += impl_->lu->solve(r);
      r = b - impl_->a * out;
      impl_->residual = r.norm() / bnorm;
      impl_->iterations = 2;
    }
  } else {
    Vec guess = out;
    out = impl_->krylov->solveWithGuess(b, guess);
    impl_->iterations = static_cast<int>(impl_->krylov->iterations());
    impl_->residual = (b - impl_->a * out).norm() / bnorm;
  }
  if (!(impl_->residual <= impl_->options.tolerance)) {
    std::ostringstream msg;
    msg << "linear solver (" << to_string(impl_->strategy) << ") residual " << impl_->residual
        << " exceeds tolerance " << impl_->options.tolerance;
    throw NumericalError(msg.str());
  }
}

SolverStrategy LinearSolver::strategy() const { return impl_->strategy; }
double LinearSolver::last_residual() const { return impl_->residual; }
int LinearSolver::last_iterations() const { return impl_->iterations; }

SparseMatrix shifted_identity(const SparseMatrix& l, cplx shift) {
  SparseMatrix id(l.rows(), l.cols());
  id.setIdentity();
  SparseMatrix out = id - shift * l;
  out.makeCompressed();
  return out;
}

}  // namespace pmlcnls
