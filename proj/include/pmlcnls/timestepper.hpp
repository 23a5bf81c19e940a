#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pmlcnls/discretization.hpp"
#include "pmlcnls/linear_solver.hpp"
#include "pmlcnls/nonlinearity.hpp"

namespace pmlcnls {

/// Additive Runge-Kutta pair: explicit part for the nonlinearity, ESDIRK part
/// (constant diagonal gamma from stage 2 on) for the linear operator.
struct ArkTableau {
  int stages = 0;
  std::vector<std::vector<double>> ae;  // explicit, strictly lower triangular
  std::vector<std::vector<double>> ai;  // implicit, lower triangular
  std::vector<double> b;                // shared weights
  std::vector<double> b_hat;            // embedded weights (error estimate only)
  std::vector<double> c;
  double gamma = 0.0;

  /// Kennedy-Carpenter ARK4(3)6L[2]SA.
  static const ArkTableau& ark4_3_6l();
};

struct OrderCheck {
  double max_defect = 0.0;           // all bicolored trees up to the order, weights b
  double max_embedded_defect = 0.0;  // same for b_hat up to order - 1
  double max_row_sum_defect = 0.0;   // sum_j a_ij - c_i for both parts
  bool structure_ok = false;         // ESDIRK shape of ai, explicit shape of ae
  bool ok(double tol = 1e-12) const;
};

OrderCheck check_order_conditions(const ArkTableau& t, int order = 4);

struct StepStats {
  double max_solver_residual = 0.0;
  double error_estimate = 0.0;  // ||dt sum (b - b_hat) F|| in the discrete L2 norm
};

/// One IMEX step u <- u + dt sum_l b_l (F_E(U_l) + F_I(U_l)), with
/// F_I = i L U and F_E = i gamma N(U). The stage matrices I - i dt gamma L_j
/// are factored once at construction.
class ImexStepper {
 public:
  ImexStepper(std::vector<SparseOperator> operators, const CnlsCoefficients& coeffs,
              NonlinearityKind kind, double dt, const SolverOptions& options = {},
              const ArkTableau& tableau = ArkTableau::ark4_3_6l());

  /// Throws NumericalError on solver failure or a non-finite result.
  void step(ComplexState& u);

  double dt() const { return dt_; }
  const StepStats& last_stats() const { return stats_; }
  const ArkTableau& tableau() const { return tableau_; }
  int n_components() const { return static_cast<int>(operators_.size()); }
  const SparseOperator& op(int j) const { return operators_[static_cast<std::size_t>(j)]; }

 private:
  void apply_linear(const ComplexState& u, ComplexState& out) const;

  std::vector<SparseOperator> operators_;
  std::vector<LinearSolver> solvers_;
  std::unique_ptr<Nonlinearity> nonlinearity_;
  cplx nl_scale_;
  double dt_;
  ArkTableau tableau_;
  StepStats stats_;
  std::vector<ComplexState> fe_, fi_;
  ComplexState stage_, rhs_;
};

struct Diagnostic {
  double t = 0.0;
  double l2_omega = 0.0;
  double max_abs = 0.0;
};

struct IntegrateOptions {
  double dt = 0.01;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  int diagnostics_every = 10;
  bool keep_snapshots = true;
  std::function<void(const Diagnostic&)> on_diagnostic;
  std::function<void(double, const ComplexState&)> on_snapshot;
  /// Called after every step with (step index, time, state).
  std::function<void(int, double, const ComplexState&)> on_step;
};

struct Snapshot {
  double t = 0.0;
  ComplexState state;
};

struct IntegrateResult {
  ComplexState final_state;
  std::vector<Snapshot> snapshots;
  std::vector<Diagnostic> diagnostics;
  int steps = 0;
};

/// Number of fixed steps for t_end (nearest integer, at least one).
int step_count(double t_end, double dt);

/// Fixed-step loop from t = 0. Snapshots are taken at the nearest step.
IntegrateResult integrate(ImexStepper& stepper, ComplexState u0, const IntegrateOptions& options);

}  // namespace pmlcnls
