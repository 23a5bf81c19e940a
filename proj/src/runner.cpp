#include "pmlcnls/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <mutex>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "pmlcnls/errors.hpp"
#include "pmlcnls/snapshot.hpp"
#include "pmlcnls/spectral.hpp"

namespace pmlcnls {

namespace fs = std::filesystem;
using nlohmann::json;

std::pair<DomainLayout, GridSpec> ground_state_grid(const ScenarioConfig& cfg) {
  const double dx = cfg.domain.lx / cfg.cells_x;
  const double dy = cfg.domain.ly / cfg.cells_y;
  const double side = cfg.initial.gs_domain > 0.0 ? cfg.initial.gs_domain : 0.0;
  auto cells = [](double length, double d, int run_cells) {
    if (length == 0.0) return run_cells;
    int c = std::max(run_cells, static_cast<int>(std::lround(length / d)));
    if ((c - run_cells) % 2 != 0) ++c;
    return c;
  };
  const int cx = cells(side, dx, cfg.cells_x);
  const int cy = cells(side, dy, cfg.cells_y);
  return make_aligned_grid(DomainLayout{cx * dx, cy * dy, 0.0, 0.0}, cx, cy);
}

std::shared_ptr<const GroundState> GroundStateCache::get(const ScenarioConfig& cfg) {
  const auto [layout, grid] = ground_state_grid(cfg);
  std::ostringstream key;
  key.precision(17);
  for (int j = 0; j < cfg.coeffs.n_components(); ++j) {
    key << cfg.coeffs.alpha_x()[j] << ',' << cfg.coeffs.alpha_y()[j] << ',' << cfg.coeffs.beta()[j] << ';';
  }
  key << cfg.coeffs.gamma() << ',' << cfg.coeffs.eps_q() << '|' << grid.nx << 'x' << grid.ny << '|'
      << grid.dx << ',' << grid.dy << '|' << cfg.initial.gs_steps;
  std::lock_guard lock(mutex_);
  auto& slot = cache_[key.str()];
  if (!slot) {
    ContinuationOptions opts;
    opts.steps = cfg.initial.gs_steps;
    slot = std::make_shared<const GroundState>(
        compute_ground_state(cfg.coeffs, layout, grid, opts).state);
  }
  return slot;
}

ComplexState make_initial_state(const ScenarioConfig& cfg, const DomainLayout& layout,
                                const GridSpec& grid, GroundStateCache* cache) {
  const auto& ic = cfg.initial;
  const int n = cfg.coeffs.n_components();
  if (ic.kind == InitialKind::File) {
    SnapshotData d = read_snapshot(ic.file);
    if (d.state.n_components() != n) throw ConfigError("initial file: component count mismatch");
    if (d.state.grid() == grid) return std::move(d.state);
    const GridSpec og = omega_only(layout, grid).second;
    const GridSpec& g = d.state.grid();
    if (g.layer_x == 0 && g.layer_y == 0 && g.nx == og.nx && g.ny == og.ny &&
        std::abs(g.dx - og.dx) <= 1e-12 * og.dx && std::abs(g.dy - og.dy) <= 1e-12 * og.dy) {
      return embed_in_layers(d.state, layout, grid);
    }
    throw ConfigError("initial file: grid does not match the run");
  }

  ComplexState u(layout, grid, n);
  const double xc = ic.center_x * layout.lx;
  const double yc = ic.center_y * layout.ly;

  std::shared_ptr<const GroundState> gs;
  int ox = 0, oy = 0;
  if (ic.uses_ground_state()) {
    GroundStateCache local;
    gs = (cache ? cache : &local)->get(cfg);
    ox = (gs->phi.grid().nx - grid.omega_nx()) / 2 - grid.layer_x;
    oy = (gs->phi.grid().ny - grid.omega_ny()) / 2 - grid.layer_y;
  }

  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x = grid.x(ix);
    for (int iy = 0; iy < grid.ny; ++iy) {
      if (!ic.in_layers && !grid.in_omega(ix, iy)) continue;
      const double y = grid.y(iy);
      for (int j = 0; j < n; ++j) {
        cplx v{};
        switch (ic.kind) {
          case InitialKind::Gaussian:
            v = ic.amplitude * std::exp(-ic.exponent * ((x - xc) * (x - xc) + (y - yc) * (y - yc)));
            break;
          case InitialKind::SolitonPlusGaussians:
          case InitialKind::KickedSoliton: {
            const int gx = ix + ox, gy = iy + oy;
            if (gx >= 0 && gy >= 0 && gx < gs->phi.grid().nx && gy < gs->phi.grid().ny) {
              v = gs->phi.at(j, gx, gy);
            }
            for (std::size_t k = 0; k < ic.bump_x.size(); ++k) {
              const double bx = x - ic.bump_x[k] * layout.lx, by = y - ic.bump_y[k] * layout.ly;
              v += ic.bump_amplitude * std::exp(-ic.bump_exponent * (bx * bx + by * by));
            }
            if (ic.kick_x != 0.0 || ic.kick_y != 0.0) {
              v *= std::polar(1.0, ic.kick_x * (x - xc) + ic.kick_y * (y - yc));
            }
            break;
          }
          case InitialKind::File:
            break;
        }
        u.at(j, ix, iy) = v;
      }
    }
  }
  return u;
}

std::vector<std::function<cplx(double, double)>> analytic_initial(const ScenarioConfig& cfg) {
  const auto& ic = cfg.initial;
  if (ic.kind != InitialKind::Gaussian) {
    throw ConfigError("analytic initial data is available for Gaussian data only");
  }
  const double xc = ic.center_x * cfg.domain.lx;
  const double yc = ic.center_y * cfg.domain.ly;
  const double a = ic.amplitude, e = ic.exponent;
  std::vector<std::function<cplx(double, double)>> f;
  for (int j = 0; j < cfg.coeffs.n_components(); ++j) {
    f.emplace_back([=](double x, double y) {
      return cplx(a * std::exp(-e * ((x - xc) * (x - xc) + (y - yc) * (y - yc))), 0.0);
    });
  }
  return f;
}

PreparedRun prepare_run(const ScenarioConfig& cfg, GroundStateCache* cache) {
  cfg.validate();
  PreparedRun r;
  std::tie(r.layout, r.grid) = make_aligned_grid(cfg.domain, cfg.cells_x, cfg.cells_y);
  r.profile = build_profiles(r.layout, r.grid, cfg.pml);
  r.stability = check_stability(r.profile, cfg.coeffs);
  const auto fields = build_coefficient_fields(r.profile, cfg.coeffs, cfg.pml.rho);
  for (int j = 0; j < cfg.coeffs.n_components(); ++j) {
    r.operators.push_back(assemble_linear_operator(cfg.coeffs.component(j),
                                                   fields[static_cast<std::size_t>(j)], r.grid));
  }
  r.initial = make_initial_state(cfg, r.layout, r.grid, cache);
  return r;
}

namespace {

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

json stability_json(const StabilityReport& s) {
  return {{"max_sigma_x", s.max_sigma_x},
          {"max_sigma_y", s.max_sigma_y},
          {"threshold", std::isfinite(s.threshold) ? json(s.threshold) : json("inf")},
          {"stable", s.stable}};
}

}  // namespace

RunSummary run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedRun prep = prepare_run(cfg, options.cache);
  RunSummary summary;
  summary.layout = prep.layout;
  summary.grid = prep.grid;
  summary.stability = prep.stability;

  const bool write = !out_dir.empty();
  std::ofstream diag;
  if (write) {
    fs::create_directories(out_dir);
    if (cfg.outputs.snapshots) fs::create_directories(out_dir / "snapshots");
    diag.open(out_dir / "diagnostics.csv");
    if (!diag) throw ConfigError("cannot write diagnostics in '" + out_dir.string() + "'");
    diag << "t,l2_omega,max_abs\n";
    diag.precision(12);
    write_profile_csv(out_dir / "profile.csv", cfg);
  }

  ImexStepper stepper(std::move(prep.operators), cfg.coeffs, cfg.nonlinearity, cfg.dt, cfg.solver);
  IntegrateOptions io;
  io.dt = cfg.dt;
  io.t_end = cfg.t_end;
  io.snapshot_times = cfg.outputs.snapshot_times;
  io.diagnostics_every = cfg.outputs.diagnostics_every;
  io.keep_snapshots = options.keep_snapshots;
  io.on_step = options.on_step;
  io.on_diagnostic = [&](const Diagnostic& d) {
    if (write) diag << d.t << ',' << d.l2_omega << ',' << d.max_abs << '\n';
    if (options.progress) {
      char line[128];
      std::snprintf(line, sizeof line, "t=%.4f l2_omega=%.6e max_abs=%.6e", d.t, d.l2_omega, d.max_abs);
      options.progress(line);
    }
  };
  if (write && cfg.outputs.snapshots) {
    io.on_snapshot = [&](double t, const ComplexState& u) {
      write_snapshot(out_dir / "snapshots" / ("u_t" + time_tag(t) + ".bin"), {u, t, cfg.coeffs, {}});
    };
  }
  summary.result = integrate(stepper, std::move(prep.initial), io);

  if (cfg.sweep.reference == ReferencePolicy::Spectral) {
    const auto ref = spectral_reference(analytic_initial(cfg), cfg.coeffs, prep.layout, prep.grid,
                                        summary.result.steps * cfg.dt, cfg.sweep.spectral_factor,
                                        nullptr, cfg.sweep.spectral_symbol);
    summary.e_r = relative_error(summary.result.final_state, ref);
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (write) {
    json s;
    s["scenario"] = cfg.name;
    s["grid"] = {{"nx", prep.grid.nx}, {"ny", prep.grid.ny}, {"dx", prep.grid.dx}, {"dy", prep.grid.dy},
                 {"layer_x", prep.grid.layer_x}, {"layer_y", prep.grid.layer_y}};
    s["layout"] = {{"lx", prep.layout.lx}, {"ly", prep.layout.ly},
                   {"delta_x", prep.layout.delta_x}, {"delta_y", prep.layout.delta_y}};
    s["stability"] = stability_json(prep.stability);
    s["steps"] = summary.result.steps;
    s["t_end"] = summary.result.steps * cfg.dt;
    json hist = json::array();
    for (const auto& d : summary.result.diagnostics) hist.push_back({d.t, d.max_abs});
    s["max_abs_history"] = hist;
    if (summary.e_r) s["e_r"] = *summary.e_r;
    s["wall_seconds"] = summary.wall_seconds;
    std::ofstream(out_dir / "summary.json") << s.dump(2) << '\n';
  }
  return summary;
}

SweepResult layer_width_sweep(const ScenarioConfig& cfg, const fs::path& out_dir,
                              const SweepOptions& options) {
  std::vector<double> fractions = options.deltas.empty() ? cfg.sweep.deltas : options.deltas;
  std::vector<double> times = options.times.empty() ? cfg.sweep.times : options.times;
  const ReferencePolicy policy = options.reference.value_or(cfg.sweep.reference);
  std::sort(fractions.begin(), fractions.end());
  std::sort(times.begin(), times.end());
  if (fractions.empty()) throw ConfigError("sweep: no layer widths");
  if (times.empty()) throw ConfigError("sweep: no measurement times");
  if (policy == ReferencePolicy::None) throw ConfigError("sweep: reference policy missing");
  if (policy == ReferencePolicy::Spectral && cfg.coeffs.gamma() != 0.0) {
    throw ConfigError("sweep: spectral reference requires gamma = 0");
  }
  const std::size_t need = policy == ReferencePolicy::WidestLayer ? 4 : 3;
  if (fractions.size() < need) throw ConfigError("sweep: too few layer widths for a rate fit");

  // Per-run configurations.
  std::vector<ScenarioConfig> runs;
  for (double f : fractions) {
    ScenarioConfig c = cfg;
    c.domain.delta_x = f * cfg.domain.lx;
    c.domain.delta_y = f * cfg.domain.lx;
    c.t_end = times.back();
    c.outputs.snapshot_times = times;
    c.sweep = {};
    c.validate();
    runs.push_back(std::move(c));
  }

  GroundStateCache cache;
  std::vector<std::vector<ComplexState>> states(runs.size());  // Omega-only, one per time
  std::vector<double> realized(runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::vector<std::exception_ptr> errors(runs.size());

  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        RunOptions ro;
        ro.keep_snapshots = true;
        ro.cache = &cache;
        char tag[32];
        std::snprintf(tag, sizeof tag, "delta_%.4f", runs[i].domain.delta_x);
        if (options.progress) {
          ro.progress = [&, tag = std::string(tag)](const std::string& line) {
            std::lock_guard lock(progress_mutex);
            options.progress(tag + " " + line);
          };
        }
        RunSummary s = run_scenario(runs[i], out_dir.empty() ? fs::path{} : out_dir / tag, ro);
        realized[i] = s.layout.delta_x;
        for (const auto& snap : s.result.snapshots) states[i].push_back(restrict_to_physical(snap.state));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(options.threads, static_cast<int>(runs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  result.deltas = realized;
  std::vector<ComplexState> reference;
  std::size_t measured = runs.size();
  if (policy == ReferencePolicy::WidestLayer) {
    reference = states.back();
    result.reference_delta = realized.back();
    measured = runs.size() - 1;
  } else {
    const auto [layout, grid] = make_aligned_grid(runs.front().domain, cfg.cells_x, cfg.cells_y);
    for (double t : times) {
      SpectralReport rep;
      const double ts = std::llround(t / cfg.dt) * cfg.dt;
      reference.push_back(spectral_reference(analytic_initial(cfg), cfg.coeffs, layout, grid, ts,
                                             cfg.sweep.spectral_factor, &rep,
                                             cfg.sweep.spectral_symbol));
      result.spectral_boundary[t] = rep.boundary_fraction;
    }
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<double> d, e;
    for (std::size_t i = 0; i < measured; ++i) {
      const double err = relative_error(states[i][k], reference[k]);
      result.points.push_back({realized[i], err, times[k]});
      d.push_back(realized[i]);
      e.push_back(err);
    }
    try {
      result.fits[times[k]] = fit_rate(d, e);
    } catch (const ConfigError&) {
      // zero errors (identical runs) leave the time without a fit
    }
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_errors_csv(out_dir / "errors.csv", result.points);
    json j;
    j["scenario"] = cfg.name;
    j["reference"] = std::string(to_string(policy));
    j["deltas"] = realized;
    if (result.reference_delta) j["reference_delta"] = *result.reference_delta;
    for (const auto& [t, f] : result.fits) {
      j["fits"].push_back({{"time", t}, {"p", f.p}, {"c", f.c}, {"correlation", f.correlation}});
    }
    std::ofstream(out_dir / "fit.json") << j.dump(2) << '\n';
  }
  return result;
}

void write_errors_csv(const fs::path& path, const std::vector<SweepPoint>& points) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f.precision(17);
  f << "delta,e_r,time\n";
  for (const auto& p : points) f << p.delta << ',' << p.e_r << ',' << p.time << '\n';
}

std::vector<SweepPoint> read_errors_csv(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line) || line.rfind("delta,e_r,time", 0) != 0) {
    throw ConfigError(path.string() + ": expected header 'delta,e_r,time'");
  }
  std::vector<SweepPoint> out;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    SweepPoint p;
    char c1 = 0, c2 = 0;
    std::istringstream ss(line);
    if (!(ss >> p.delta >> c1 >> p.e_r >> c2 >> p.time) || c1 != ',' || c2 != ',') {
      throw ConfigError(path.string() + ": malformed line " + std::to_string(lineno));
    }
    out.push_back(p);
  }
  return out;
}

void write_profile_csv(const fs::path& path, const ScenarioConfig& cfg) {
  const auto [layout, grid] = make_aligned_grid(cfg.domain, cfg.cells_x, cfg.cells_y);
  const auto profile = build_profiles(layout, grid, cfg.pml);
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f.precision(12);
  f << "x,sigma\n";
  for (int i = 0; i < grid.nx; ++i) f << grid.x(i) << ',' << profile.sigma_x[static_cast<std::size_t>(i)] << '\n';
}

}  // namespace pmlcnls
