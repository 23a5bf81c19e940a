#include "pmlcnls/ground_state.hpp"

#include <Eigen/SparseCore>
#include <Eigen/UmfPackSupport>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pmlcnls/discretization.hpp"
#include "pmlcnls/nonlinearity.hpp"
#include "pmlcnls/pml.hpp"

namespace pmlcnls {

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::array<double, 3>;  // phi, phi', partial power

enum class Shot { TooSmall, TooLarge, Undecided };

struct Trajectory {
  Shot outcome = Shot::Undecided;
  std::vector<double> phi, dphi, power;  // at r = k * dr, k >= 1
};

Trajectory shoot(double c3, double c5, double phi0, const ShootingOptions& o, bool record) {
  auto rhs = [c3, c5](const OdeState& y, OdeState& dy, double r) {
    const double p = y[0];
    dy[0] = y[1];
    dy[1] = -y[1] / r + p - c3 * p * p * p - c5 * p * p * p * p * p;
    dy[2] = 2.0 * std::numbers::pi * r * p * p;
  };
  const double eps = o.r_start;
  const double curv = 0.25 * (phi0 - c3 * std::pow(phi0, 3) - c5 * std::pow(phi0, 5));
  OdeState y{phi0 + curv * eps * eps, 2.0 * curv * eps, std::numbers::pi * phi0 * phi0 * eps * eps};

  auto stepper = odeint::make_dense_output(o.ode_abs_tol, o.ode_rel_tol,
                                           odeint::runge_kutta_dopri5<OdeState>());
  stepper.initialize(y, eps, std::min(1e-3, o.sample_dr));
  Trajectory tr;
  int next = 1;
  OdeState s;
  while (stepper.current_time() < o.r_max) {
    const auto [t0, t1] = stepper.do_step(rhs);
    (void)t0;
    for (double rk = next * o.sample_dr; rk <= t1 && rk <= o.r_max; rk = (++next) * o.sample_dr) {
      stepper.calc_state(rk, s);
      if (record) {
        tr.phi.push_back(s[0]);
        tr.dphi.push_back(s[1]);
        tr.power.push_back(s[2]);
      }
      if (s[0] < 0.0) {
        tr.outcome = Shot::TooLarge;
        return tr;
      }
      if (s[1] > 0.0) {
        tr.outcome = Shot::TooSmall;
        return tr;
      }
    }
  }
  return tr;
}

}  // namespace

double RadialProfile::operator()(double radius) const {
  radius = std::abs(radius);
  if (r.empty()) return 0.0;
  if (radius >= r_cut) {
    const double pc = phi.back();
    return pc * std::sqrt(r_cut / radius) * std::exp(-(radius - r_cut));
  }
  const double h = r[1] - r[0];
  const auto k = std::min(static_cast<std::size_t>(radius / h), r.size() - 2);
  const double t = (radius - r[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * phi[k] + (t3 - 2 * t2 + t) * h * dphi[k] +
         (-2 * t3 + 3 * t2) * phi[k + 1] + (t3 - t2) * h * dphi[k + 1];
}

RadialProfile shoot_radial_ground_state(double c3, double c5, const ShootingOptions& o) {
  if (!(c3 > 0.0)) throw ConfigError("shooting: the cubic coefficient must be positive");
  if (!(o.r_max > 1.0) || !(o.sample_dr > 0.0) || !(o.r_start > 0.0)) {
    throw ConfigError("shooting: invalid options");
  }
  double lo = 1e-3;
  if (shoot(c3, c5, lo, o, false).outcome != Shot::TooSmall) {
    throw NumericalError("shooting: lower amplitude does not undershoot");
  }
  double hi = 1.0;
  int tries = 0;
  while (shoot(c3, c5, hi, o, false).outcome != Shot::TooLarge) {
    lo = hi;
    hi *= 2.0;
    if (++tries > 40) throw NumericalError("shooting: bisection interval not bracketing");
  }
  while (hi - lo > o.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shoot(c3, c5, mid, o, false).outcome == Shot::TooLarge ? hi : lo) = mid;
  }

  // The two bracketing trajectories agree until the unstable mode e^r takes
  // over; the profile is kept only where they agree.
  const Trajectory a = shoot(c3, c5, lo, o, true);
  const Trajectory b = shoot(c3, c5, hi, o, true);
  const std::size_t n = std::min(a.phi.size(), b.phi.size());
  std::size_t keep = 0;
  while (keep < n) {
    const double m = 0.5 * (a.phi[keep] + b.phi[keep]);
    if (std::abs(a.phi[keep] - b.phi[keep]) > 1e-3 * m || a.dphi[keep] >= 0.0 ||
        b.dphi[keep] >= 0.0 || b.phi[keep] <= 0.0) {
      break;
    }
    ++keep;
  }
  if (keep < 2) throw NumericalError("shooting: trajectories diverge immediately");

  RadialProfile p;
  p.c3 = c3;
  p.c5 = c5;
  p.phi0 = 0.5 * (lo + hi);
  p.r.push_back(0.0);
  p.phi.push_back(p.phi0);
  p.dphi.push_back(0.0);
  for (std::size_t k = 0; k < keep; ++k) {
    p.r.push_back(static_cast<double>(k + 1) * o.sample_dr);
    p.phi.push_back(0.5 * (a.phi[k] + b.phi[k]));
    p.dphi.push_back(0.5 * (a.dphi[k] + b.dphi[k]));
  }
  p.r_cut = p.r.back();
  // Tail from the asymptote phi ~ C e^{-r} / sqrt(r): int 2 pi r phi^2 dr.
  const double pc = p.phi.back();
  p.power = 0.5 * (a.power[keep - 1] + b.power[keep - 1]) + std::numbers::pi * pc * pc * p.r_cut;
  return p;
}

GroundState ground_state_from_radial(const RadialProfile& profile, const CnlsCoefficients& coeffs,
                                     const DomainLayout& omega, const GridSpec& grid) {
  if (grid.layer_x != 0 || grid.layer_y != 0) {
    throw ConfigError("ground state: grid must cover Omega only");
  }
  GroundState gs{coeffs, ComplexState(omega, grid, coeffs.n_components()), 0.0};
  const double xc = 0.5 * omega.lx, yc = 0.5 * omega.ly;
  for (int j = 0; j < coeffs.n_components(); ++j) {
    for (int ix = 1; ix + 1 < grid.nx; ++ix) {
      for (int iy = 1; iy + 1 < grid.ny; ++iy) {
        gs.phi.at(j, ix, iy) = profile(std::hypot(grid.x(ix) - xc, grid.y(iy) - yc));
      }
    }
  }
  gs.residual = stationary_residual(gs.phi, coeffs);
  return gs;
}

namespace {

std::vector<SparseOperator> plain_operators(const CnlsCoefficients& coeffs, const GridSpec& grid) {
  const auto zero = AbsorptionProfile::constant(grid, 0.0, 0.0);
  std::vector<SparseOperator> ops;
  for (int j = 0; j < coeffs.n_components(); ++j) {
    const auto f = build_coefficient_fields(zero, coeffs.component(j), 0.0);
    ops.push_back(assemble_linear_operator(coeffs.component(j), f, grid));
  }
  return ops;
}

bool boundary_point(const GridSpec& g, int ix, int iy) {
  return ix == 0 || iy == 0 || ix == g.nx - 1 || iy == g.ny - 1;
}

using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Real restriction of the nonlinearity for n = 1 (cubic-quintic) or n = 2
// (CME2): N_j and dN_j/dphi_k at one point.
struct PointNonlinearity {
  std::array<double, 2> n{};
  std::array<std::array<double, 2>, 2> d{};
};

PointNonlinearity real_nonlinearity(const double* p, int comps, double eps_q) {
  PointNonlinearity r;
  if (comps == 1) {
    const double u = p[0];
    r.n[0] = u * u * u + eps_q * std::pow(u, 5);
    r.d[0][0] = 3 * u * u + 5 * eps_q * std::pow(u, 4);
    return r;
  }
  for (int j = 0; j < 2; ++j) {
    const double u = p[j], v = p[1 - j];
    r.n[j] = u * u * u + 3 * v * v * u + eps_q * std::pow(u, 5);
    r.d[j][j] = 3 * u * u + 3 * v * v + 5 * eps_q * std::pow(u, 4);
    r.d[j][1 - j] = 6 * u * v;
  }
  return r;
}

struct NewtonSystem {
  const CnlsCoefficients& coeffs;
  const GridSpec& grid;
  std::vector<SparseOperator> ops;

  NewtonSystem(const CnlsCoefficients& c, const GridSpec& g)
      : coeffs(c), grid(g), ops(plain_operators(c, g)) {}

  // Residual vector over all points of all components; boundary rows pin phi to 0.
  Eigen::VectorXd residual(const Eigen::VectorXd& phi) const {
    const int comps = coeffs.n_components();
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd r(phi.size());
    for (int j = 0; j < comps; ++j) {
      r.segment(j * n, n) = ops[static_cast<std::size_t>(j)].matrix.real() * phi.segment(j * n, n);
    }
    std::array<double, 2> p{};
    for (int ix = 0; ix < grid.nx; ++ix) {
      for (int iy = 0; iy < grid.ny; ++iy) {
        const auto i = static_cast<Eigen::Index>(grid.index(ix, iy));
        if (boundary_point(grid, ix, iy)) {
          for (int j = 0; j < comps; ++j) r[j * n + i] = phi[j * n + i];
          continue;
        }
        for (int j = 0; j < comps; ++j) p[j] = phi[j * n + i];
        const auto nl = real_nonlinearity(p.data(), comps, coeffs.eps_q());
        for (int j = 0; j < comps; ++j) r[j * n + i] += -p[j] + coeffs.gamma() * nl.n[j];
      }
    }
    return r;
  }

  RealSparse jacobian(const Eigen::VectorXd& phi) const {
    const int comps = coeffs.n_components();
    const auto n = static_cast<Eigen::Index>(grid.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < comps; ++j) {
      const auto& m = ops[static_cast<std::size_t>(j)].matrix;
      for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
        for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
          trip.emplace_back(static_cast<int>(j * n + row), static_cast<int>(j * n + it.col()),
                            it.value().real());
        }
      }
    }
    std::array<double, 2> p{};
    for (int ix = 0; ix < grid.nx; ++ix) {
      for (int iy = 0; iy < grid.ny; ++iy) {
        const auto i = static_cast<Eigen::Index>(grid.index(ix, iy));
        if (boundary_point(grid, ix, iy)) {
          for (int j = 0; j < comps; ++j) trip.emplace_back(j * n + i, j * n + i, 1.0);
          continue;
        }
        for (int j = 0; j < comps; ++j) p[j] = phi[j * n + i];
        const auto nl = real_nonlinearity(p.data(), comps, coeffs.eps_q());
        for (int j = 0; j < comps; ++j) {
          for (int k = 0; k < comps; ++k) {
            const double v = coeffs.gamma() * nl.d[j][k] - (j == k ? 1.0 : 0.0);
            trip.emplace_back(static_cast<int>(j * n + i), static_cast<int>(k * n + i), v);
          }
        }
      }
    }
    RealSparse jac(comps * n, comps * n);
    jac.setFromTriplets(trip.begin(), trip.end());
    jac.makeCompressed();
    return jac;
  }

  double norm(const Eigen::VectorXd& r) const { return r.norm() * std::sqrt(grid.dx * grid.dy); }
};

// Newton at fixed coefficients. Returns false on divergence or a sign change.
bool newton(const NewtonSystem& sys, Eigen::VectorXd& phi, const ContinuationOptions& o,
            NewtonRecord& rec) {
  Eigen::VectorXd r = sys.residual(phi);
  double res = sys.norm(r);
  rec.residuals.push_back(res);
  const double start = res;
  // The Jacobian pattern is fixed for given coefficients: one symbolic
  // analysis per solve. UmfPackLU keeps a reference to the factored matrix.
  Eigen::UmfPackLU<RealSparse> lu;
  lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
  RealSparse jac;
  for (int it = 0; it < o.max_newton && res >= o.tol; ++it) {
    jac = sys.jacobian(phi);
    if (it == 0) lu.analyzePattern(jac);
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) return false;
    const Eigen::VectorXd minus_r = -r;
    const Eigen::VectorXd delta = lu.solve(minus_r);
    if (!delta.allFinite()) return false;
    phi += delta;
    r = sys.residual(phi);
    res = sys.norm(r);
    rec.residuals.push_back(res);
    if (!std::isfinite(res) || res > 1e3 * std::max(start, 1.0)) return false;
  }
  rec.min_value = phi.minCoeff();
  return res < o.tol && rec.min_value > -1e-12;
}

Eigen::VectorXd to_real(const ComplexState& s) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(s.data().size()));
  for (std::size_t i = 0; i < s.data().size(); ++i) v[static_cast<Eigen::Index>(i)] = s.data()[i].real();
  return v;
}

void from_real(const Eigen::VectorXd& v, ComplexState& s) {
  for (std::size_t i = 0; i < s.data().size(); ++i) s.data()[i] = v[static_cast<Eigen::Index>(i)];
}

}  // namespace

double stationary_residual(const ComplexState& phi, const CnlsCoefficients& coeffs) {
  if (phi.n_components() != coeffs.n_components()) {
    throw ConfigError("stationary residual: component count mismatch");
  }
  const auto ops = plain_operators(coeffs, phi.grid());
  ComplexState r = evaluate_nonlinearity(phi, coeffs);
  for (int j = 0; j < phi.n_components(); ++j) {
    const auto lphi = ops[static_cast<std::size_t>(j)].apply(phi.component(j));
    auto rj = r.component(j);
    const auto pj = phi.component(j);
    for (std::size_t i = 0; i < rj.size(); ++i) rj[i] += lphi[i] - pj[i];
  }
  return l2_norm(r);
}

ContinuationResult continue_ground_state(const GroundState& start, const CnlsCoefficients& target,
                                         const ContinuationOptions& o) {
  if (start.phi.grid().layer_x != 0 || start.phi.grid().layer_y != 0) {
    throw ConfigError("ground state: grid must cover Omega only");
  }
  if (target.n_components() != start.coeffs.n_components()) {
    throw ConfigError("ground state: component count mismatch");
  }
  if (target.n_components() > 2) throw ConfigError("ground state: at most two components");
  const bool same = target == start.coeffs;
  if (!same && o.steps < 1) throw ConfigError("ground state: homotopy step count too small");

  std::vector<NewtonRecord> history;
  Eigen::VectorXd phi = to_real(start.phi);
  const GridSpec& grid = start.phi.grid();

  auto solve_at = [&](double s, Eigen::VectorXd& guess) {
    const auto c = CnlsCoefficients::interpolate(start.coeffs, target, s);
    NewtonSystem sys(c, grid);
    NewtonRecord rec;
    rec.s = s;
    const bool ok = newton(sys, guess, o, rec);
    return std::pair{ok, rec};
  };

  {
    auto [ok, rec] = solve_at(0.0, phi);
    if (!ok) throw ContinuationError("ground state: Newton failed at the homotopy start", 0.0);
    history.push_back(rec);
  }
  if (!same) {
    double s = 0.0;
    double ds = 1.0 / o.steps;
    int halvings = 0;
    while (s < 1.0) {
      const double trial = 1.0 - (s + ds) < 1e-12 ? 1.0 : s + ds;
      Eigen::VectorXd guess = phi;
      auto [ok, rec] = solve_at(trial, guess);
      if (ok) {
        phi = std::move(guess);
        s = trial;
        history.push_back(rec);
        halvings = 0;
        continue;
      }
      if (++halvings > o.max_halvings) {
        std::ostringstream msg;
        msg << "ground state: Newton diverged after s=" << s;
        throw ContinuationError(msg.str(), s);
      }
      ds *= 0.5;
    }
  }

  GroundState state{target, start.phi, 0.0};
  from_real(phi, state.phi);
  state.residual = stationary_residual(state.phi, target);
  return {std::move(state), std::move(history)};
}

ContinuationResult compute_ground_state(const CnlsCoefficients& target, const DomainLayout& omega,
                                        const GridSpec& omega_grid, const ContinuationOptions& options,
                                        const ShootingOptions& shooting) {
  const int n = target.n_components();
  if (n != 1 && n != 2) throw ConfigError("ground state: one or two components required");
  if (!(target.gamma() > 0.0)) throw ConfigError("ground state: gamma must be positive");
  const double c3 = n == 2 ? 4.0 * target.gamma() : target.gamma();
  const double c5 = target.gamma() * target.eps_q();
  const auto radial = shoot_radial_ground_state(c3, c5, shooting);
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
  const CnlsCoefficients start(ones, ones, zeros, target.gamma(), target.eps_q());
  const auto gs = ground_state_from_radial(radial, start, omega, omega_grid);
  return continue_ground_state(gs, target, options);
}

}  // namespace pmlcnls
