#include "pmlcnls/scenarios.hpp"

#include <filesystem>

#include "pmlcnls/errors.hpp"

namespace pmlcnls {

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {
      "lin-beta0", "lin-beta05", "lin-beta05-unstable", "nl-beta0",
      "nl-mixed",  "nl-pulse",   "nl-mixed-longtime"};
  return names;
}

namespace {

ScenarioConfig linear_base() {
  ScenarioConfig c;
  c.domain = {6.0, 6.0, 1.2, 1.2};
  c.cells_x = c.cells_y = 350;
  c.desk_cells_x = c.desk_cells_y = 180;
  c.dt = 0.01;
  c.t_end = 1.0;
  c.initial.kind = InitialKind::Gaussian;
  c.outputs.snapshot_times = {0.0, 1.0};
  c.sweep.deltas = {0.08, 0.12, 0.16, 0.2, 0.25, 0.3};
  c.sweep.reference = ReferencePolicy::Spectral;
  c.sweep.times = {1.0};
  return c;
}

ScenarioConfig nonlinear_base() {
  ScenarioConfig c;
  c.nonlinearity = NonlinearityKind::Cme2;
  c.domain = {14.0, 14.0, 2.8, 2.8};
  c.cells_x = c.cells_y = 250;
  c.desk_cells_x = c.desk_cells_y = 150;
  c.dt = 0.01;
  c.t_end = 5.0;
  c.initial.kind = InitialKind::SolitonPlusGaussians;
  c.initial.bump_x = {0.5, 0.5, 0.25, 0.75};
  c.initial.bump_y = {0.25, 0.75, 0.5, 0.5};
  c.initial.bump_amplitude = 0.8;
  c.initial.bump_exponent = 2.0;
  c.outputs.snapshot_times = {0.0, 2.0, 5.0};
  c.sweep.deltas = {0.08, 0.12, 0.16, 0.2, 0.25, 0.3};
  c.sweep.reference = ReferencePolicy::WidestLayer;
  c.sweep.times = {5.0};
  return c;
}

CnlsCoefficients mixed_coefficients() {
  return CnlsCoefficients({1.0, 0.75}, {1.0, 1.0}, {0.2, 0.15}, 0.5, -0.2);
}

}  // namespace

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  if (name == "lin-beta0") {
    c = linear_base();
    c.coeffs = CnlsCoefficients::scalar(0.75, 1.25, 0.0);
    c.pml.hx = c.pml.hy = 30.0;
  } else if (name == "lin-beta05" || name == "lin-beta05-unstable") {
    c = linear_base();
    c.coeffs = CnlsCoefficients::scalar(1.0, 1.0, 0.5);
    c.pml.hx = c.pml.hy = 3.3;
    if (name == "lin-beta05-unstable") {
      c.pml.hx = c.pml.hy = 20.0;
      // the blow-up starts later on coarser grids; 180 cells only reach it after t = 0.6
      c.desk_cells_x = c.desk_cells_y = 250;
      c.t_end = 0.6;
      c.outputs.snapshot_times = {0.0, 0.4, 0.6};
      c.sweep = {};
    }
  } else if (name == "nl-beta0") {
    c = nonlinear_base();
    c.coeffs = CnlsCoefficients({0.75, 1.25}, {1.25, 0.75}, {0.0, 0.0}, 0.5, -0.2);
    c.pml.hx = c.pml.hy = 8.0;
  } else if (name == "nl-mixed" || name == "nl-mixed-longtime") {
    c = nonlinear_base();
    c.coeffs = mixed_coefficients();
    c.pml.hx = c.pml.hy = 7.6;
    if (name == "nl-mixed-longtime") {
      c.t_end = 200.0;
      c.desk_t_end = 50.0;
      c.outputs.snapshot_times = {0.0, 5.0, 50.0, 200.0};
      c.sweep = {};
    }
  } else if (name == "nl-pulse") {
    c = nonlinear_base();
    c.coeffs = mixed_coefficients();
    c.pml.hx = c.pml.hy = 7.6;
    c.domain = {10.0, 10.0, 2.0, 2.0};
    c.cells_x = c.cells_y = 180;
    c.desk_cells_x = c.desk_cells_y = 150;
    c.t_end = 3.0;
    c.initial.kind = InitialKind::KickedSoliton;
    c.initial.bump_x.clear();
    c.initial.bump_y.clear();
    c.initial.kick_x = c.initial.kick_y = 6.0;
    c.initial.gs_domain = 14.0;
    c.outputs.snapshot_times = {0.0, 0.5, 1.0, 1.5, 3.0};
    c.sweep.deltas = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35};
    c.sweep.times = {0.5, 3.0};
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  c.name = name;
  c.validate();
  return c;
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  for (const auto& n : builtin_scenario_names()) {
    if (n == name_or_path) return builtin_scenario(n);
  }
  if (std::filesystem::exists(name_or_path)) return load_config(name_or_path);
  throw ConfigError("unknown scenario '" + name_or_path + "' (not a built-in name or a file)");
}

}  // namespace pmlcnls
