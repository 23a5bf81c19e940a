// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N ...] [--tier desk|paper] [--out DIR] [--verbose]
//
// The desk tier runs the reduced-resolution variants; the paper tier runs the
// published resolutions and takes hours. PMLCNLS_ACCEPTANCE_TIER overrides the
// default tier.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmlcnls/analysis.hpp"
#include "pmlcnls/discretization.hpp"
#include "pmlcnls/ground_state.hpp"
#include "pmlcnls/log.hpp"
#include "pmlcnls/metrics.hpp"
#include "pmlcnls/pml.hpp"
#include "pmlcnls/runner.hpp"
#include "pmlcnls/scenarios.hpp"
#include "pmlcnls/spectral.hpp"
#include "pmlcnls/timestepper.hpp"

using namespace pmlcnls;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Context {
  bool paper = false;
  fs::path out;
  int threads = 1;
  bool verbose = false;

  ScaleSpec scale() const { return parse_scale(paper ? "paper" : "desk"); }
  fs::path dir(const std::string& name) const {
    const auto d = out / name;
    fs::create_directories(d);
    return d;
  }
  std::function<void(const std::string&)> progress() const {
    if (!verbose) return {};
    return [](const std::string& line) { std::cerr << "  " << line << '\n'; };
  }
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; the criterion fails if any sub-check fails.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool strictly_decreasing(const std::vector<SweepPoint>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].e_r < pts[i - 1].e_r)) return false;
  }
  return true;
}

std::vector<SweepPoint> at_time(const std::vector<SweepPoint>& pts, double t) {
  std::vector<SweepPoint> out;
  for (const auto& p : pts) {
    if (std::abs(p.time - t) < 1e-9) out.push_back(p);
  }
  return out;
}

std::string describe(const std::vector<SweepPoint>& pts) {
  std::ostringstream s;
  for (const auto& p : pts) s << fmt(p.delta, 3) << ":" << fmt(p.e_r, 3) << " ";
  return s.str();
}

// Max of Re(nu) over wave vectors on the unit circle; nu is homogeneous of
// degree two in k, so the direction decides the sign.
double max_re_corner(double b, double sigma, int samples) {
  double worst = -1e300;
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * kPi * i / samples;
    worst = std::max(worst,
                     corner_symbol(b, sigma, sigma, kPi / 4, std::cos(t), std::sin(t)).nu.real());
  }
  return worst;
}

Outcome criterion1(const Context&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double s05 = threshold_sigma1(0.5), s02 = threshold_sigma1(0.2);
  o.require(s05 >= 3.315 && s05 <= 3.335, "sigma1(0.5) in [3.315, 3.335]");
  o.require(s02 >= 7.66 && s02 <= 7.68, "sigma1(0.2) in [7.66, 7.68]");

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ub(0.05, 0.95);
  double worst_root = 0.0;
  int disagreements = 0;
  for (int n = 0; n < 50; ++n) {
    const double b = ub(rng);
    const double th = threshold_sigma1(b);
    // relative to the sum of the magnitudes of the terms of D
    const double scale = b * b * std::pow(th, 4) + std::sqrt(2.0) * th * (b * b * th * th + 4) +
                         std::abs(b * b / 2 - 2) * th * th + 4;
    worst_root = std::max(worst_root, std::abs(stability_polynomial(b, th)) / scale);
    const bool below = max_re_corner(b, 0.98 * th, 4000) <= 1e-14;
    const bool above = max_re_corner(b, 1.02 * th, 4000) > 0.0;
    if (!below || !above) ++disagreements;
  }
  o.require(worst_root <= 1e-10, "D(threshold) = 0 to 1e-10");
  o.require(disagreements == 0, "dense-sampling sign test agrees on 50 random beta");
  const double wall = seconds_since(t0);
  o.require(wall < 1.0, "runtime < 1 s");
  o.detail << "sigma1(0.5)=" << fmt(s05, 10) << " sigma1(0.2)=" << fmt(s02, 10)
           << " max|D|/scale=" << fmt(worst_root, 2) << " sign disagreements=" << disagreements
           << " (" << fmt(wall, 2) << " s)";
  return o;
}

Outcome criterion2(const Context&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int positive = 0, spurious_zero = 0, mismatch = 0;
  double max_re = -1e300;
  for (int n = 0; n < 100000; ++n) {
    const double sigma = 20.0 * u(rng);
    const double b = 1.98 * u(rng) - 0.99;
    const double kx = 20.0 * u(rng) - 10.0, ky = 20.0 * u(rng) - 10.0;
    const double closed = side_symbol_re_closed_form(b, sigma, kx, ky);
    const double re = side_symbol(b, sigma, kPi / 4, kx, ky).nu.real();
    const double scale = 1.0 + kx * kx + ky * ky;
    max_re = std::max(max_re, re / scale);
    if (re > 1e-12 * scale || closed > 1e-12 * scale) ++positive;
    if (std::abs(4.0 * re - closed) > 1e-12 * scale) ++mismatch;
    const double w = 2 * kx + b * ky;
    if (std::abs(closed) <= 1e-12 * scale && std::abs(w) > 1e-5 && sigma > 1e-5) ++spurious_zero;
  }
  // The zero set itself: 2 kx + b ky = 0 or sigma = 0.
  double on_zero_set = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double sigma = 20.0 * u(rng), b = 1.98 * u(rng) - 0.99, ky = 20.0 * u(rng) - 10.0;
    on_zero_set = std::max(on_zero_set, std::abs(side_symbol(b, sigma, kPi / 4, -b * ky / 2, ky).nu.real()));
    on_zero_set = std::max(on_zero_set, std::abs(side_symbol(b, 0.0, kPi / 4, ky, ky).nu.real()));
  }
  o.require(positive == 0, "Re(nu_side) <= 0 on 1e5 samples");
  o.require(spurious_zero == 0, "equality only on 2kx + b ky = 0 or sigma = 0");
  o.require(on_zero_set <= 1e-12 * 201, "Re(nu_side) = 0 on the zero set");
  o.require(mismatch == 0, "composed symbol matches the closed form");
  const double wall = seconds_since(t0);
  o.require(wall < 1.0, "runtime < 1 s");
  o.detail << "max Re/(1+|k|^2)=" << fmt(max_re, 3) << " positives=" << positive
           << " spurious zeros=" << spurious_zero << " zero-set max|Re|=" << fmt(on_zero_set, 2)
           << " (" << fmt(wall, 2) << " s)";
  return o;
}

Outcome criterion3(const Context&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad1 = 0, bad2 = 0, centre = 0;
  for (int n = 0; n < 10000; ++n) {
    const ComponentCoefficients c{0.5 + u(rng), 0.5 + u(rng), 0.6 * u(rng) - 0.3};
    // a quarter of the samples on the imaginary axis
    const double re_s = n % 4 == 0 ? 0.0 : 3.0 * u(rng);
    const cplx s(re_s, 20.0 * u(rng) - 10.0);
    const double ky = 10.0 * u(rng) - 5.0;
    const double sigma = 1e-3 + 20.0 * u(rng);
    const auto m = modal_lambdas(c, s, ky);
    const cplx rc = rotation_center(c, ky);
    const cplx l1 = pml_shifted_lambda(m.lambda1, c, ky, kPi / 4, sigma);
    const cplx l2 = pml_shifted_lambda(m.lambda2, c, ky, kPi / 4, sigma);
    if (std::abs(m.lambda1 - rc) <= 1e-9 || std::abs(m.lambda2 - rc) <= 1e-9) {
      ++centre;
      continue;
    }
    if (!(l1.real() > 0.0)) ++bad1;
    if (!(l2.real() < 0.0)) ++bad2;
  }
  o.require(bad1 == 0, "Re(lambda1~) > 0");
  o.require(bad2 == 0, "Re(lambda2~) < 0");
  const double wall = seconds_since(t0);
  o.require(wall < 1.0, "runtime < 1 s");
  o.detail << "1e4 samples: violations lambda1=" << bad1 << " lambda2=" << bad2
           << " at rotation centre=" << centre << " (" << fmt(wall, 2) << " s)";
  return o;
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

std::vector<cplx> random_field(std::size_t n, unsigned seed, const GridSpec& g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      if (ix == 0 || iy == 0 || ix == g.nx - 1 || iy == g.ny - 1) v[g.index(ix, iy)] = 0.0;
    }
  }
  return v;
}

Outcome criterion4(const Context&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> errs;
  for (int n : {10, 20, 40, 80}) {
    const double d = 1.0 / n;
    std::vector<cplx> line(n + 1);
    for (int i = 0; i <= n; ++i) line[i] = std::sin(0.3 + i * d);
    const auto out = apply_d2(line, d);
    double e = 0.0;
    for (int i = 2; i <= n - 2; ++i) e = std::max(e, std::abs(out[i] + std::sin(0.3 + i * d)));
    errs.push_back(e);
  }
  std::vector<double> orders;
  for (std::size_t k = 1; k < errs.size(); ++k) orders.push_back(std::log2(errs[k - 1] / errs[k]));
  for (double p : orders) o.require(p >= 3.7 && p <= 4.3, "observed order in [3.7, 4.3]");

  // sigma = 0, beta = 0: the assembled operator against line-wise stencils
  auto [layout, grid] = make_aligned_grid({3, 2, 0, 0}, 30, 24);
  const ComponentCoefficients c{0.75, 1.25, 0.0};
  const auto f0 = build_coefficient_fields(AbsorptionProfile::constant(grid, 0, 0), c, kPi / 4);
  const auto op = assemble_linear_operator(c, f0, grid);
  const auto u = random_field(grid.size(), 4, grid);
  const auto got = op.apply(u);
  std::vector<cplx> want(grid.size());
  for (int ix = 1; ix < grid.nx - 1; ++ix) {
    std::vector<cplx> line(u.begin() + grid.index(ix, 0), u.begin() + grid.index(ix, 0) + grid.ny);
    const auto d2 = apply_d2(line, grid.dy);
    for (int iy = 1; iy < grid.ny - 1; ++iy) want[grid.index(ix, iy)] += c.alpha_y * d2[iy];
  }
  for (int iy = 1; iy < grid.ny - 1; ++iy) {
    std::vector<cplx> line(grid.nx);
    for (int ix = 0; ix < grid.nx; ++ix) line[ix] = u[grid.index(ix, iy)];
    const auto d2 = apply_d2(line, grid.dx);
    for (int ix = 1; ix < grid.nx - 1; ++ix) want[grid.index(ix, iy)] += c.alpha_x * d2[ix];
  }
  const double reduction = rel_diff(got, want);
  o.require(reduction <= 1e-13, "reduction at sigma = 0, beta = 0 to 1e-13");

  // constant sigma: both orderings of the stretched mixed product agree
  auto [l2, g2] = make_aligned_grid({2, 2, 0, 0}, 24, 24);
  const ComponentCoefficients cm{1.0, 0.75, 0.3};
  const auto fc = build_coefficient_fields(AbsorptionProfile::constant(g2, 2.0, 1.5), cm, kPi / 4);
  const auto v = random_field(g2.size(), 8, g2);
  const double commutator =
      rel_diff(assemble_mixed_term(cm, fc, g2, MixedOrdering::XThenY).apply(v),
               assemble_mixed_term(cm, fc, g2, MixedOrdering::YThenX).apply(v));
  o.require(commutator < 1e-12, "constant-sigma commutator < 1e-12");
  const double wall = seconds_since(t0);
  o.require(wall < 10.0, "runtime < 10 s");
  o.detail << "orders=" << fmt(orders[0], 3) << "," << fmt(orders[1], 3) << "," << fmt(orders[2], 3)
           << " reduction=" << fmt(reduction, 2) << " commutator=" << fmt(commutator, 2) << " ("
           << fmt(wall, 2) << " s)";
  return o;
}

Outcome criterion5(const Context& ctx) {
  // Gamma = 0, no layers, Dirichlet box wide enough that the pulse stays
  // inside up to t = 1. The reference evolves the same initial data with the
  // symbol of the five-point differences, so only the time error remains.
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const int cells = ctx.paper ? 350 : 180;
  const double len = 40.0, t_end = 1.0;
  const auto coeffs = CnlsCoefficients::scalar(0.75, 1.25, 0.0);
  auto [layout, grid] = make_aligned_grid({len, len, 0.0, 0.0}, cells, cells);
  std::function<cplx(double, double)> init = [&](double x, double y) {
    const double dx = x - len / 2, dy = y - len / 2;
    return std::exp(-(dx * dx + dy * dy));
  };
  SpectralReport rep;
  const auto ref = spectral_reference({init}, coeffs, layout, grid, t_end, 2, &rep,
                                      SpectralSymbol::FourthOrderDifference);
  const auto fields = build_coefficient_fields(AbsorptionProfile::constant(grid, 0.0, 0.0),
                                               coeffs.component(0), kPi / 4);
  const auto op = assemble_linear_operator(coeffs.component(0), fields, grid);
  std::vector<double> dts{0.04, 0.02, 0.01}, errs;
  for (double dt : dts) {
    ComplexState u(layout, grid, 1);
    for (int i = 0; i < grid.nx; ++i) {
      for (int j = 0; j < grid.ny; ++j) u.at(0, i, j) = init(grid.x(i), grid.y(j));
    }
    ImexStepper stepper({op}, coeffs, NonlinearityKind::None, dt);
    const int n = step_count(t_end, dt);
    for (int s = 0; s < n; ++s) stepper.step(u);
    errs.push_back(relative_error(u, ref));
    if (ctx.verbose) std::cerr << "  dt=" << dt << " e=" << errs.back() << '\n';
  }
  const double p1 = std::log2(errs[0] / errs[1]), p2 = std::log2(errs[1] / errs[2]);
  o.require(p1 >= 3.5 && p1 <= 4.5 && p2 >= 3.5 && p2 <= 4.5, "temporal order in [3.5, 4.5]");
  o.require(!rep.localization_warning, "reference localized in its box");
  const double wall = seconds_since(t0);
  if (!ctx.paper) o.require(wall < 300.0, "runtime < 5 min");
  o.detail << cells << "^2, e(dt)=" << fmt(errs[0], 3) << "," << fmt(errs[1], 3) << ","
           << fmt(errs[2], 3) << " orders=" << fmt(p1, 3) << "," << fmt(p2, 3) << " ("
           << fmt(wall, 3) << " s)";
  return o;
}

Outcome linear_sweep(const Context& ctx, const std::string& name, double p_lo, double p_hi,
                     double desk_p_min) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = apply_scale(builtin_scenario(name), ctx.scale());
  SweepOptions so;
  so.threads = ctx.threads;
  so.progress = ctx.progress();
  const auto r = layer_width_sweep(cfg, ctx.dir(name + "-sweep"), so);
  const auto pts = at_time(r.points, 1.0);
  const auto& fit = r.fits.at(1.0);
  if (ctx.paper) {
    o.require(fit.p >= p_lo && fit.p <= p_hi, "p in [" + fmt(p_lo) + ", " + fmt(p_hi) + "]");
    o.require(pts.back().e_r * 10.0 <= pts.front().e_r, "e_r(0.3Lx) 10x below e_r(0.08Lx)");
  } else {
    o.require(strictly_decreasing(pts), "monotone decrease");
    o.require(fit.p > desk_p_min, "p > " + fmt(desk_p_min));
  }
  const double wall = seconds_since(t0);
  if (!ctx.paper) o.require(wall < 1800.0, "runtime < 30 min");
  o.detail << cfg.cells_x << "^2 p=" << fmt(fit.p) << " r=" << fmt(fit.correlation)
           << " e_r: " << describe(pts) << "(" << fmt(wall, 3) << " s)";
  return o;
}

Outcome criterion6(const Context& ctx) { return linear_sweep(ctx, "lin-beta0", 1.27, 2.37, 0.8); }
Outcome criterion7(const Context& ctx) { return linear_sweep(ctx, "lin-beta05", 0.75, 1.39, 0.5); }

struct LayerGrowth {
  double at04 = 0.0, at06 = 0.0;        // max |u| over the layers
  double all04 = 0.0, all06 = 0.0;      // max |u| over the whole grid
  double omega04 = 0.0, omega06 = 0.0;  // L2 over Omega
};

LayerGrowth layer_maxima(ScenarioConfig cfg, const Context& ctx, const std::string& tag) {
  cfg.t_end = 0.6;
  cfg.outputs.snapshot_times = {0.0, 0.4, 0.6};
  RunOptions ro;
  ro.keep_snapshots = true;
  ro.progress = ctx.progress();
  const auto s = run_scenario(cfg, ctx.dir("instability-" + tag), ro);
  LayerGrowth g;
  for (const auto& snap : s.result.snapshots) {
    if (std::abs(snap.t - 0.4) < 1e-9) {
      g.at04 = max_abs_layers(snap.state);
      g.all04 = std::max(g.at04, max_abs_omega(snap.state));
      g.omega04 = l2_norm_omega(snap.state);
    }
    if (std::abs(snap.t - 0.6) < 1e-9) {
      g.at06 = max_abs_layers(snap.state);
      g.all06 = std::max(g.at06, max_abs_omega(snap.state));
      g.omega06 = l2_norm_omega(snap.state);
    }
  }
  return g;
}

Outcome criterion8(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto unstable_cfg = apply_scale(builtin_scenario("lin-beta05-unstable"), ctx.scale());
  auto stable_cfg = unstable_cfg;
  stable_cfg.pml.hx = stable_cfg.pml.hy = builtin_scenario("lin-beta05").pml.hx;
  const auto bad = layer_maxima(unstable_cfg, ctx, "h20");
  const auto good = layer_maxima(stable_cfg, ctx, "h3.3");
  const double growth = bad.at06 / bad.at04;
  o.require(growth >= 5.0, "unstable layer maximum grows >= 5x from t=0.4 to t=0.6");
  // The outgoing wave is still entering the layers at t = 0.6, so the stable
  // run decays in max|u| over the grid and in L2(Omega) while the layer
  // maximum stays below the initial amplitude.
  o.require(good.all06 < good.all04, "stable max|u| decays");
  o.require(good.omega06 < good.omega04, "stable L2(Omega) decays");
  o.require(good.at06 < 1.0, "stable layer maximum bounded by the initial amplitude");
  const double wall = seconds_since(t0);
  if (!ctx.paper) o.require(wall < 600.0, "runtime < 10 min");
  o.detail << unstable_cfg.cells_x << "^2 h=20: max|u|_layers " << fmt(bad.at04, 3) << " -> "
           << fmt(bad.at06, 3) << " (x" << fmt(growth, 3) << "); h=3.3: " << fmt(good.at04, 3)
           << " -> " << fmt(good.at06, 3) << ", max|u| " << fmt(good.all04, 3) << " -> "
           << fmt(good.all06, 3) << ", L2(Omega) " << fmt(good.omega04, 4) << " -> "
           << fmt(good.omega06, 4) << " (" << fmt(wall, 3) << " s)";
  return o;
}

Outcome criterion9(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  GroundStateCache cache;
  const std::map<std::string, std::pair<double, double>> paper_range{
      {"nl-beta0", {0.28, 0.66}}, {"nl-mixed", {0.21, 0.49}}};
  for (const auto& [name, range] : paper_range) {
    const auto cfg = apply_scale(builtin_scenario(name), ctx.scale());
    SweepOptions so;
    so.threads = ctx.threads;
    so.progress = ctx.progress();
    const auto r = layer_width_sweep(cfg, ctx.dir(name + "-sweep"), so);
    const auto pts = at_time(r.points, 5.0);
    const auto& fit = r.fits.at(5.0);
    if (ctx.paper) {
      o.require(fit.p >= range.first && fit.p <= range.second,
                name + " p in [" + fmt(range.first) + ", " + fmt(range.second) + "]");
    } else {
      o.require(std::abs(fit.correlation) > 0.97, name + " |r| > 0.97");
      o.require(pts.back().e_r < pts.front().e_r, name + " e_r(widest fit) < e_r(narrowest)");
      o.require(fit.p > 0.0, name + " decreasing fit");
    }
    o.detail << name << " " << cfg.cells_x << "^2 p=" << fmt(fit.p) << " r=" << fmt(fit.correlation)
             << " e_r: " << describe(pts) << "; ";
  }
  const double wall = seconds_since(t0);
  if (!ctx.paper) o.require(wall < 3600.0, "runtime < 1 h");
  o.detail << "(" << fmt(wall, 4) << " s)";
  return o;
}

Outcome criterion10(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto base = apply_scale(builtin_scenario("nl-pulse"), ctx.scale());
  GroundStateCache cache;

  // Single run at delta = 0.2 Lx. The amplitude before entry is max|u| over
  // Omega (both components) at the last step whose global maximum still lies
  // in Omega; the soliton tail reaches the layers long before the pulse does.
  auto single = base;
  single.domain.delta_x = single.domain.delta_y = 0.2 * single.domain.lx;
  single.sweep = {};
  single.outputs.snapshot_times = {0.0, 3.0};
  double amp_before = 0.0, t_entry = -1.0;
  RunOptions ro;
  ro.cache = &cache;
  ro.progress = ctx.progress();
  ro.on_step = [&](int, double t, const ComplexState& u) {
    if (t_entry >= 0.0) return;
    const auto& g = u.grid();
    double peak = -1.0;
    bool inside = false;
    for (int j = 0; j < u.n_components(); ++j) {
      for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
          const double a = std::abs(u.at(j, ix, iy));
          if (a > peak) {
            peak = a;
            inside = g.in_omega(ix, iy);
          }
        }
      }
    }
    if (inside) {
      amp_before = max_abs_omega(u);
    } else {
      t_entry = t;
    }
  };
  const auto s = run_scenario(single, ctx.dir("nl-pulse-single"), ro);
  const double residual = max_abs_omega(s.result.final_state);
  o.require(t_entry > 0.0, "pulse reaches the layers");
  o.require(std::abs(amp_before - 0.99) <= 0.099, "amplitude before entry 0.99 +- 10%");
  const double residual_tol = ctx.paper ? 1e-5 * 10 : 1e-3;
  o.require(residual < residual_tol, "max|u| over Omega at t=3 < " + fmt(residual_tol));

  SweepOptions so;
  so.threads = ctx.threads;
  so.progress = ctx.progress();
  const auto r = layer_width_sweep(base, ctx.dir("nl-pulse-sweep"), so);
  const double p05 = r.fits.at(0.5).p, p3 = r.fits.at(3.0).p;
  o.require(p05 > 0.0 && p3 > 0.0, "fitted rates positive");
  if (ctx.paper) {
    o.require(std::abs(p05 - 0.51) <= 0.4 * 0.51, "p(0.5) within 40% of 0.51");
    o.require(std::abs(p3 - 0.48) <= 0.4 * 0.48, "p(3) within 40% of 0.48");
  }
  const double wall = seconds_since(t0);
  o.detail << base.cells_x << "^2 amplitude before entry=" << fmt(amp_before) << " (entry t="
           << fmt(t_entry, 3) << ") max|u|_Omega(3)=" << fmt(residual, 3) << " p(0.5)="
           << fmt(p05) << " r=" << fmt(r.fits.at(0.5).correlation) << " p(3)=" << fmt(p3)
           << " r=" << fmt(r.fits.at(3.0).correlation) << " e_r(0.5): "
           << describe(at_time(r.points, 0.5)) << "e_r(3): " << describe(at_time(r.points, 3.0))
           << "(" << fmt(wall, 4) << " s)";
  return o;
}

Outcome criterion11(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  ShootingOptions tight;
  tight.r_max = 30.0;
  tight.ode_abs_tol = tight.ode_rel_tol = 1e-14;
  tight.bisection_tol = 1e-15;
  const auto a = shoot_radial_ground_state(1.0, 0.0);
  const auto b = shoot_radial_ground_state(1.0, 0.0, tight);
  const double d0 = std::abs(a.phi0 - b.phi0) / b.phi0;
  const double dp = std::abs(a.power - b.power) / b.power;
  o.require(d0 <= 1e-6 && dp <= 1e-6, "Townes values agree with the tightened rerun to 1e-6");

  // Unperturbed ground state of the mixed system evolved to t = 1, first on
  // its own grid (Omega, zero Dirichlet on the boundary), which is the problem
  // it is stationary for. The run with layers is reported only: the profile is
  // cut to zero at the boundary of Omega where its tail is still ~1e-4, and
  // with layers attached that cut relaxes.
  auto cfg = apply_scale(builtin_scenario("nl-mixed"), ctx.scale());
  cfg.initial.kind = InitialKind::KickedSoliton;
  cfg.initial.kick_x = cfg.initial.kick_y = 0.0;
  cfg.initial.bump_x.clear();
  cfg.initial.bump_y.clear();
  cfg.t_end = 1.0;
  cfg.outputs.snapshot_times = {0.0, 1.0};
  cfg.sweep = {};
  GroundStateCache cache;
  auto drift = [&](const ScenarioConfig& c, const std::string& tag) {
    RunOptions ro;
    ro.keep_snapshots = true;
    ro.cache = &cache;
    ro.progress = ctx.progress();
    const auto s = run_scenario(c, ctx.dir(tag), ro);
    const auto& phi = s.result.snapshots.front().state;
    const auto& u = s.result.final_state;
    // L phi - phi + gamma N(phi) = 0, so u(t) = e^{it} phi
    auto expected = phi;
    const cplx phase = std::polar(1.0, s.result.steps * c.dt);
    for (auto& v : expected.data()) v *= phase;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < u.n_components(); ++j) {
      for (int ix = 0; ix < s.grid.nx; ++ix) {
        for (int iy = 0; iy < s.grid.ny; ++iy) {
          if (!s.grid.in_omega(ix, iy)) continue;
          const double m = std::abs(u.at(j, ix, iy)) - std::abs(phi.at(j, ix, iy));
          num += m * m;
          den += std::norm(phi.at(j, ix, iy));
        }
      }
    }
    return std::pair{std::sqrt(num / den), relative_error(u, expected)};
  };
  auto own = cfg;
  own.domain.delta_x = own.domain.delta_y = 0.0;
  const auto [mod_own, phase_own] = drift(own, "ground-state");
  const auto [mod_pml, phase_pml] = drift(cfg, "ground-state-layers");
  o.require(mod_own <= 1e-3, "| |u(1)| - phi | <= 1e-3 relative");
  o.require(phase_own <= 1e-3, "| u(1) - e^{i} phi | <= 1e-3 relative");
  const double wall = seconds_since(t0);
  if (!ctx.paper) o.require(wall < 600.0, "runtime < 10 min");
  o.detail << "phi0=" << fmt(a.phi0, 11) << " power=" << fmt(a.power, 10) << " rel diff "
           << fmt(d0, 2) << "/" << fmt(dp, 2) << "; " << cfg.cells_x
           << "^2 on Omega: ||u(1)|-phi|=" << fmt(mod_own, 3) << " |u(1)-e^{i}phi|="
           << fmt(phase_own, 3) << "; with layers (reported): " << fmt(mod_pml, 3) << ", "
           << fmt(phase_pml, 3) << " (" << fmt(wall, 4) << " s)";
  return o;
}

Outcome criterion12(const Context& ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = apply_scale(builtin_scenario("nl-mixed-longtime"), ctx.scale());
  cfg.outputs.snapshots = true;
  RunOptions ro;
  ro.progress = ctx.progress();
  const auto s = run_scenario(cfg, ctx.dir("nl-mixed-longtime"), ro);
  double early = 0.0, late = 0.0;
  for (const auto& d : s.result.diagnostics) {
    if (d.t <= 5.0 + 1e-9) {
      early = std::max(early, d.max_abs);
    } else {
      late = std::max(late, d.max_abs);
    }
  }
  o.require(late <= 1.05 * early, "max|u|(t) <= 1.05 max over [0, 5]");
  const double wall = seconds_since(t0);
  o.detail << cfg.cells_x << "^2 to t=" << fmt(s.result.steps * cfg.dt) << ": max|u| on [0,5]="
           << fmt(early) << ", after t=5=" << fmt(late) << " (" << fmt(wall, 4) << " s)";
  return o;
}

const std::map<int, std::pair<std::string, std::function<Outcome(const Context&)>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome(const Context&)>>> c{
      {1, {"stability thresholds", criterion1}},
      {2, {"side-layer stability", criterion2}},
      {3, {"modal damping", criterion3}},
      {4, {"discretization order", criterion4}},
      {5, {"time-integrator order", criterion5}},
      {6, {"linear sweep beta=0", criterion6}},
      {7, {"linear sweep beta=0.5", criterion7}},
      {8, {"instability above threshold", criterion8}},
      {9, {"nonlinear sweeps", criterion9}},
      {10, {"pulse leaving the domain", criterion10}},
      {11, {"ground state", criterion11}},
      {12, {"long-time stability", criterion12}},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  std::string tier = "desk";
  if (const char* env = std::getenv("PMLCNLS_ACCEPTANCE_TIER")) tier = env;
  Context ctx;
  ctx.out = fs::temp_directory_path() / "pmlcnls_acceptance";
  app.add_option("--criterion,-k", selected, "criteria to run (default all)")->delimiter(',');
  app.add_option("--tier", tier, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--out", ctx.out, "directory for run outputs");
  app.add_option("--threads", ctx.threads, "concurrent sweep runs")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", ctx.verbose, "print run progress to stderr");
  CLI11_PARSE(app, argc, argv);
  ctx.paper = tier == "paper";
  if (!ctx.verbose) set_log_sink([](LogLevel, const std::string&) {});
  if (selected.empty()) {
    for (const auto& [k, v] : criteria()) selected.push_back(k);
  }

  int failures = 0;
  for (int k : selected) {
    const auto it = criteria().find(k);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second(ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << it->second.first
              << ", " << tier << "): " << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
