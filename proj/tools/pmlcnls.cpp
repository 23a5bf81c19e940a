// Command line front end: stability thresholds, modal analysis, layer
// profiles, scenario runs, layer-width sweeps, rate fits and ground states.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmlcnls/analysis.hpp"
#include "pmlcnls/config.hpp"
#include "pmlcnls/errors.hpp"
#include "pmlcnls/ground_state.hpp"
#include "pmlcnls/log.hpp"
#include "pmlcnls/metrics.hpp"
#include "pmlcnls/runner.hpp"
#include "pmlcnls/scenarios.hpp"
#include "pmlcnls/snapshot.hpp"

namespace fs = std::filesystem;
using namespace pmlcnls;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string scale = "paper";
  int threads = 1;
  bool quiet = false;
};

ScenarioConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required (scenario name or INI path)");
  return apply_scale(resolve_scenario(c.config), parse_scale(c.scale));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string cfmt(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
  return buf;
}

cplx parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw ConfigError("bad complex value '" + text + "' (expected re[,im])");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ConfigError("bad complex value '" + text + "'");
  }
  return {re, im};
}

int cmd_threshold(const std::vector<double>& betas) {
  if (betas.empty()) {
    std::printf("tilde_beta,sigma1\n");
    for (int k = 1; k <= 19; ++k) {
      const double b = 0.05 * k;
      std::printf("%.2f,%.10g\n", b, threshold_sigma1(b));
    }
    return 0;
  }
  for (double b : betas) std::printf("%.10g,%.10g\n", b, threshold_sigma1(b));
  return 0;
}

int cmd_analyze(const Common& c, double kx, double ky, const std::string& s_text) {
  const ScenarioConfig cfg = load(c);
  const auto& co = cfg.coeffs;
  const cplx s = parse_complex(s_text);
  std::printf("components %d\n", co.n_components());
  for (int j = 0; j < co.n_components(); ++j) {
    const auto cj = co.component(j);
    const auto d = dispersion(cj, kx, ky);
    const auto m = modal_lambdas(cj, s, ky);
    std::printf("component %d: alpha_x=%g alpha_y=%g beta=%g tilde_beta=%.10g\n", j + 1, cj.alpha_x,
                cj.alpha_y, cj.beta, cj.tilde_beta());
    std::printf("  dispersion kx=%g ky=%g: omega=%.10g vg=%.10g vp=%s\n", kx, ky, d.omega, d.vg,
                d.vp ? fmt("%.10g", *d.vp).c_str() : "undefined");
    std::printf("  modal s=%s ky=%g: lambda1=%s lambda2=%s\n", cfmt(s).c_str(), ky,
                cfmt(m.lambda1).c_str(), cfmt(m.lambda2).c_str());
  }
  const double th = system_threshold(co);
  std::printf("threshold sigma1 = %s\n", std::isfinite(th) ? fmt("%.10g", th).c_str() : "inf");
  if (const auto t = find_removal_transform(co)) {
    std::printf("mixed derivatives removable: a=%.10g b=%.10g theta=%.10g\n", t->a, t->b, t->theta);
    for (std::size_t j = 0; j < t->transformed.size(); ++j) {
      const auto& tc = t->transformed[j];
      std::printf("  component %zu: alpha_x=%.10g alpha_y=%.10g beta=%.3g\n", j + 1, tc.alpha_x,
                  tc.alpha_y, tc.beta);
    }
  } else {
    std::printf("mixed derivatives not removable\n");
  }
  return 0;
}

int cmd_profile(const Common& c) {
  const ScenarioConfig cfg = load(c);
  if (c.out.empty()) {
    const fs::path tmp = fs::temp_directory_path() / "pmlcnls_profile.csv";
    write_profile_csv(tmp, cfg);
    std::cout << std::ifstream(tmp).rdbuf();
    fs::remove(tmp);
  } else {
    write_profile_csv(c.out, cfg);
  }
  return 0;
}

std::function<void(const std::string&)> progress_printer(const Common& c) {
  if (c.quiet) return {};
  return [](const std::string& line) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  };
}

int cmd_run(const Common& c) {
  const ScenarioConfig cfg = load(c);
  if (c.out.empty()) throw ConfigError("--out is required");
  RunOptions ro;
  ro.progress = progress_printer(c);
  const RunSummary s = run_scenario(cfg, c.out, ro);
  std::printf("steps %d, wall %.1f s\n", s.result.steps, s.wall_seconds);
  if (s.e_r) std::printf("e_r %.6e\n", *s.e_r);
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& deltas, const std::string& reference,
              const std::vector<double>& times) {
  const ScenarioConfig cfg = load(c);
  if (c.out.empty()) throw ConfigError("--out is required");
  SweepOptions so;
  so.deltas = deltas;
  so.times = times;
  if (!reference.empty()) so.reference = reference_policy_from_string(reference);
  so.threads = c.threads;
  so.progress = progress_printer(c);
  const SweepResult r = layer_width_sweep(cfg, c.out, so);
  std::printf("delta,e_r,time\n");
  for (const auto& p : r.points) std::printf("%.6g,%.6e,%g\n", p.delta, p.e_r, p.time);
  for (const auto& [t, f] : r.fits) {
    std::printf("t=%g: e_r ~ %.4g * 10^(-%.4f delta), correlation %.4f\n", t, f.c, f.p, f.correlation);
  }
  return 0;
}

int cmd_fit(const std::string& path) {
  const auto points = read_errors_csv(path);
  std::map<double, std::vector<SweepPoint>> by_time;
  for (const auto& p : points) by_time[p.time].push_back(p);
  if (by_time.empty()) throw ConfigError(path + ": no data");
  std::printf("time,c,p,correlation\n");
  for (const auto& [t, pts] : by_time) {
    const RateFit f = fit_rate(std::span<const SweepPoint>(pts));
    std::printf("%g,%.10g,%.10g,%.6f\n", t, f.c, f.p, f.correlation);
  }
  return 0;
}

int cmd_groundstate(const Common& c, int steps) {
  ScenarioConfig cfg = load(c);
  if (c.out.empty()) throw ConfigError("--out is required");
  if (steps > 0) cfg.initial.gs_steps = steps;
  const auto [layout, grid] = ground_state_grid(cfg);
  ContinuationOptions opts;
  opts.steps = cfg.initial.gs_steps;
  const ContinuationResult r = compute_ground_state(cfg.coeffs, layout, grid, opts);
  if (!c.quiet) {
    for (const auto& h : r.history) {
      std::printf("s=%.4f newton=%zu residual=%.3e min=%.3e\n", h.s, h.residuals.size() - 1,
                  h.residuals.back(), h.min_value);
    }
  }
  double max_phi = 0.0;
  for (const auto& v : r.state.phi.data()) max_phi = std::max(max_phi, std::abs(v));
  SnapshotData d{r.state.phi, 0.0, cfg.coeffs, {{"residual", r.state.residual}, {"max", max_phi}}};
  const fs::path out(c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_snapshot(out, d);
  std::printf("grid %dx%d, residual %.3e, max %.10g\n", grid.nx, grid.ny, r.state.residual, max_phi);
  return 0;
}

int cmd_config(const Common& c) {
  if (c.config.empty()) {
    for (const auto& n : builtin_scenario_names()) std::printf("%s\n", n.c_str());
    return 0;
  }
  const std::string text = format_config(load(c));
  if (c.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream(c.out) << text;
  }
  return 0;
}

void add_common(CLI::App* app, Common& c, bool scale, bool out) {
  app->add_option("--config,-c", c.config, "scenario name or INI file");
  if (out) app->add_option("--out,-o", c.out, "output path");
  if (scale) app->add_option("--scale", c.scale, "paper, desk or a cell-count factor");
  app->add_flag("--quiet,-q", c.quiet, "no progress lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled NLS solver with perfectly matched layers"};
  app.require_subcommand(1);
  Common common;

  std::vector<double> betas;
  auto* threshold = app.add_subcommand("threshold", "stability threshold sigma1 (table or values)");
  threshold->add_option("--beta", betas, "scaled mixed coefficients in (0,1)")->delimiter(',');

  double kx = 1.0, ky = 1.0;
  std::string s_text = "0,1";
  auto* analyze = app.add_subcommand("analyze", "dispersion, modal exponents, removal transform");
  add_common(analyze, common, false, false);
  analyze->add_option("--kx", kx, "wavenumber for the dispersion relation");
  analyze->add_option("--ky", ky, "transverse wavenumber");
  analyze->add_option("--s", s_text, "Laplace variable re[,im]");

  auto* profile = app.add_subcommand("profile", "absorption profile as CSV (x,sigma)");
  add_common(profile, common, true, true);

  auto* run = app.add_subcommand("run", "integrate a scenario");
  add_common(run, common, true, true);

  std::vector<double> deltas, times;
  std::string reference;
  auto* sweep = app.add_subcommand("sweep", "layer-width convergence sweep");
  add_common(sweep, common, true, true);
  sweep->add_option("--threads", common.threads, "concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--deltas", deltas, "layer widths as fractions of lx")->delimiter(',');
  sweep->add_option("--times", times, "measurement times")->delimiter(',');
  sweep->add_option("--reference", reference, "spectral or widest");

  std::string errors_csv;
  auto* fit = app.add_subcommand("fit", "rate fit of an errors CSV");
  fit->add_option("errors", errors_csv, "CSV with header delta,e_r,time")->required();

  int gs_steps = 0;
  auto* gs = app.add_subcommand("groundstate", "shooting plus continuation; writes a snapshot");
  add_common(gs, common, true, true);
  gs->add_option("--steps", gs_steps, "homotopy steps (default from config)");

  auto* config = app.add_subcommand("config", "list built-in scenarios or print one as INI");
  add_common(config, common, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*threshold) return cmd_threshold(betas);
    if (*analyze) return cmd_analyze(common, kx, ky, s_text);
    if (*profile) return cmd_profile(common);
    if (*run) return cmd_run(common);
    if (*sweep) return cmd_sweep(common, deltas, reference, times);
    if (*fit) return cmd_fit(errors_csv);
    if (*gs) return cmd_groundstate(common, gs_steps);
    if (*config) return cmd_config(common);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
