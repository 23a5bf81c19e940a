#include "pmlcnls/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/kernels.hpp"

namespace pmlcnls {

const ArkTableau& ArkTableau::ark4_3_6l() {
  static const ArkTableau t = [] {
    ArkTableau a;
    a.stages = 6;
    a.gamma = 1.0 / 4.0;
    a.c = {0.0, 1.0 / 2.0, 83.0 / 250.0, 31.0 / 50.0, 17.0 / 20.0, 1.0};
    a.b = {82889.0 / 524892.0, 0.0, 15625.0 / 83664.0, 69875.0 / 102672.0, -2260.0 / 8211.0,
           1.0 / 4.0};
    a.b_hat = {4586570599.0 / 29645900160.0, 0.0, 178811875.0 / 945068544.0,
               814220225.0 / 1159782912.0, -3700637.0 / 11593932.0, 61727.0 / 225920.0};
    a.ai.assign(6, std::vector<double>(6, 0.0));
    a.ae.assign(6, std::vector<double>(6, 0.0));
    auto& i = a.ai;
    i[1] = {1.0 / 4.0, 1.0 / 4.0, 0, 0, 0, 0};
    i[2] = {8611.0 / 62500.0, -1743.0 / 31250.0, 1.0 / 4.0, 0, 0, 0};
    i[3] = {5012029.0 / 34652500.0, -654441.0 / 2922500.0, 174375.0 / 388108.0, 1.0 / 4.0, 0, 0};
    i[4] = {15267082809.0 / 155376265600.0, -71443401.0 / 120774400.0,
            730878875.0 / 902184768.0, 2285395.0 / 8070912.0, 1.0 / 4.0, 0};
    i[5] = a.b;
    auto& e = a.ae;
    e[1] = {1.0 / 2.0, 0, 0, 0, 0, 0};
    e[2] = {13861.0 / 62500.0, 6889.0 / 62500.0, 0, 0, 0, 0};
    e[3] = {-116923316275.0 / 2393684061468.0, -2731218467317.0 / 15368042101831.0,
            9408046702089.0 / 11113171139209.0, 0, 0, 0};
    e[4] = {-451086348788.0 / 2902428689909.0, -2682348792572.0 / 7519795681897.0,
            12662868775082.0 / 11960479115383.0, 3355817975965.0 / 11060851509271.0, 0, 0};
    e[5] = {647845179188.0 / 3216320057751.0, 73281519250.0 / 8382639484533.0,
            552539513391.0 / 3454668386233.0, 3354512671639.0 / 8306763924573.0,
            4040.0 / 17871.0, 0};
    return a;
  }();
  return t;
}

bool OrderCheck::ok(double tol) const {
  return structure_ok && max_defect <= tol && max_embedded_defect <= tol &&
         max_row_sum_defect <= tol;
}

namespace {

// Rooted trees up to order 4 as parent lists (node 0 is the root, children
// have larger indices than their parents), with their densities.
struct Tree {
  std::vector<int> parent;
  double density;
};

const std::vector<Tree>& trees() {
  static const std::vector<Tree> t = {
      {{-1}, 1.0},           {{-1, 0}, 2.0},          {{-1, 0, 0}, 3.0},
      {{-1, 0, 1}, 6.0},     {{-1, 0, 0, 0}, 4.0},    {{-1, 0, 1, 0}, 8.0},
      {{-1, 0, 1, 1}, 12.0}, {{-1, 0, 1, 2}, 24.0},
  };
  return t;
}

// Elementary weight for one coloring: bit k of `colors` selects the explicit
// matrix for the edge into node k. The root color is irrelevant since b is shared.
double elementary_weight(const ArkTableau& t, const Tree& tree, unsigned colors,
                         const std::vector<double>& w) {
  const int s = t.stages;
  const std::size_t n = tree.parent.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(s, 1.0));
  for (std::size_t k = n - 1; k >= 1; --k) {
    const auto& a = (colors >> k) & 1u ? t.ae : t.ai;
    const auto p = static_cast<std::size_t>(tree.parent[k]);
    for (int i = 0; i < s; ++i) {
      double v = 0.0;
      for (int j = 0; j < s; ++j) v += a[i][j] * g[k][j];
      g[p][i] *= v;
    }
  }
  double phi = 0.0;
  for (int i = 0; i < s; ++i) phi += w[i] * g[0][i];
  return phi;
}

}  // namespace

OrderCheck check_order_conditions(const ArkTableau& t, int order) {
  OrderCheck r;
  const int s = t.stages;
  r.structure_ok = t.ai.size() == static_cast<std::size_t>(s) && t.ae.size() == t.ai.size() &&
                   t.ai[0][0] == 0.0;
  for (int i = 0; i < s && r.structure_ok; ++i) {
    for (int j = i; j < s; ++j) {
      if (t.ae[i][j] != 0.0) r.structure_ok = false;
      if (j > i && t.ai[i][j] != 0.0) r.structure_ok = false;
    }
    if (i > 0 && t.ai[i][i] != t.gamma) r.structure_ok = false;
  }
  for (int i = 0; i < s; ++i) {
    double se = 0.0, si = 0.0;
    for (int j = 0; j < s; ++j) {
      se += t.ae[i][j];
      si += t.ai[i][j];
    }
    r.max_row_sum_defect = std::max({r.max_row_sum_defect, std::abs(se - t.c[i]), std::abs(si - t.c[i])});
  }
  for (const Tree& tree : trees()) {
    const int p = static_cast<int>(tree.parent.size());
    if (p > order) continue;
    for (unsigned colors = 0; colors < (1u << p); colors += 2) {
      const double want = 1.0 / tree.density;
      r.max_defect = std::max(r.max_defect, std::abs(elementary_weight(t, tree, colors, t.b) - want));
      if (p < order) {
        r.max_embedded_defect = std::max(
            r.max_embedded_defect, std::abs(elementary_weight(t, tree, colors, t.b_hat) - want));
      }
    }
  }
  return r;
}

ImexStepper::ImexStepper(std::vector<SparseOperator> operators, const CnlsCoefficients& coeffs,
                         NonlinearityKind kind, double dt, const SolverOptions& options,
                         const ArkTableau& tableau)
    : operators_(std::move(operators)),
      nonlinearity_(make_nonlinearity(kind, coeffs.eps_q(), coeffs.n_components())),
      nl_scale_(0.0, coeffs.gamma()),
      dt_(dt),
      tableau_(tableau) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (static_cast<int>(operators_.size()) != coeffs.n_components()) {
    throw ConfigError("stepper: one operator per component required");
  }
  if (!check_order_conditions(tableau_).ok()) {
    throw NumericalError("ARK tableau fails its order conditions");
  }
  const cplx shift(0.0, dt * tableau_.gamma);
  for (const auto& op : operators_) {
    solvers_.emplace_back(shifted_identity(op.matrix, shift), options);
  }
}

void ImexStepper::apply_linear(const ComplexState& u, ComplexState& out) const {
  const auto n = static_cast<Eigen::Index>(u.grid().size());
  for (int j = 0; j < u.n_components(); ++j) {
    Eigen::Map<const Eigen::VectorXcd> in(u.component(j).data(), n);
    Eigen::Map<Eigen::VectorXcd> res(out.component(j).data(), n);
    res.noalias() = operators_[static_cast<std::size_t>(j)].matrix * in;
    res *= cplx(0.0, 1.0);
  }
}

void ImexStepper::step(ComplexState& u) {
  const int s = tableau_.stages;
  if (fe_.size() != static_cast<std::size_t>(s) || fe_[0].grid() != u.grid() ||
      fe_[0].n_components() != u.n_components()) {
    fe_.assign(s, ComplexState(u.layout(), u.grid(), u.n_components()));
    fi_.assign(s, ComplexState(u.layout(), u.grid(), u.n_components()));
    stage_ = ComplexState(u.layout(), u.grid(), u.n_components());
    rhs_ = stage_;
  }
  const auto& k = kernels::active();
  const std::size_t total = u.data().size();
  stats_ = {};

  for (int st = 0; st < s; ++st) {
    rhs_.data() = u.data();
    for (int l = 0; l < st; ++l) {
      const double we = dt_ * tableau_.ae[st][l];
      const double wi = dt_ * tableau_.ai[st][l];
      if (we != 0.0) k.axpy(we, fe_[l].data().data(), rhs_.data().data(), total);
      if (wi != 0.0) k.axpy(wi, fi_[l].data().data(), rhs_.data().data(), total);
    }
    if (tableau_.ai[st][st] == 0.0) {
      stage_.data() = rhs_.data();
    } else {
      for (int j = 0; j < u.n_components(); ++j) {
        const auto& solver = solvers_[static_cast<std::size_t>(j)];
        solver.solve(rhs_.component(j), stage_.component(j));
        stats_.max_solver_residual = std::max(stats_.max_solver_residual, solver.last_residual());
      }
    }
    apply_linear(stage_, fi_[st]);
    nonlinearity_->evaluate(stage_, fe_[st], nl_scale_);
  }

  // Embedded estimate first; it reads the stage derivatives only.
  rhs_.fill(cplx{});
  for (int l = 0; l < s; ++l) {
    const double w = dt_ * (tableau_.b[l] - tableau_.b_hat[l]);
    k.axpy(w, fe_[l].data().data(), rhs_.data().data(), total);
    k.axpy(w, fi_[l].data().data(), rhs_.data().data(), total);
  }
  stats_.error_estimate = l2_norm(rhs_);

  for (int l = 0; l < s; ++l) {
    const double w = dt_ * tableau_.b[l];
    if (w == 0.0) continue;
    k.axpy(w, fe_[l].data().data(), u.data().data(), total);
    k.axpy(w, fi_[l].data().data(), u.data().data(), total);
  }
  if (!u.all_finite()) throw NumericalError("non-finite value in the solution");
}

int step_count(double t_end, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(t_end >= dt * (1.0 - 1e-9))) throw ConfigError("t_end must be at least dt");
  return std::max(1, static_cast<int>(std::llround(t_end / dt)));
}

IntegrateResult integrate(ImexStepper& stepper, ComplexState u0, const IntegrateOptions& options) {
  const double dt = stepper.dt();
  if (std::abs(options.dt - dt) > 1e-12 * dt) {
    throw ConfigError("integrate: options.dt differs from the stepper time step");
  }
  const int n = step_count(options.t_end, dt);
  std::vector<int> snap_steps;
  for (double t : options.snapshot_times) {
    if (t < 0.0 || t > options.t_end * (1.0 + 1e-12)) {
      throw ConfigError("snapshot time outside [0, t_end]");
    }
    snap_steps.push_back(static_cast<int>(std::llround(t / dt)));
  }

  IntegrateResult r;
  r.final_state = std::move(u0);
  auto diag = [&](int step) {
    const auto& d = r.final_state.data();
    Diagnostic g{step * dt, l2_norm_omega(r.final_state), kernels::active().max_abs(d.data(), d.size())};
    r.diagnostics.push_back(g);
    if (options.on_diagnostic) options.on_diagnostic(g);
  };
  auto snap = [&](int step) {
    for (int s : snap_steps) {
      if (s != step) continue;
      if (options.on_snapshot) options.on_snapshot(step * dt, r.final_state);
      if (options.keep_snapshots) r.snapshots.push_back({step * dt, r.final_state});
      break;
    }
  };

  diag(0);
  snap(0);
  for (int step = 1; step <= n; ++step) {
    try {
      stepper.step(r.final_state);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << e.what() << " at t=" << step * dt;
      throw NumericalError(msg.str());
    }
    r.steps = step;
    if (options.on_step) options.on_step(step, step * dt, r.final_state);
    if (options.diagnostics_every > 0 && (step % options.diagnostics_every == 0 || step == n)) {
      diag(step);
    }
    snap(step);
  }
  return r;
}

}  // namespace pmlcnls
