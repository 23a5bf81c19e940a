#pragma once

// Scenario configuration in INI form with the sections
// [scenario] [coefficients] [domain] [grid] [pml] [time] [initial] [outputs] [sweep].

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmlcnls/linear_solver.hpp"
#include "pmlcnls/model.hpp"
#include "pmlcnls/nonlinearity.hpp"
#include "pmlcnls/pml.hpp"
#include "pmlcnls/spectral.hpp"

namespace pmlcnls {

enum class InitialKind { Gaussian, SolitonPlusGaussians, KickedSoliton, File };
enum class ReferencePolicy { None, Spectral, WidestLayer };

std::string_view to_string(InitialKind k);
std::string_view to_string(ReferencePolicy p);
ReferencePolicy reference_policy_from_string(std::string_view name);

/// Positions are fractions of lx (x) and ly (y).
struct InitialConfig {
  InitialKind kind = InitialKind::Gaussian;
  // gaussian: amplitude * exp(-exponent ((x-xc)^2 + (y-yc)^2)) in every component
  double amplitude = 1.0;
  double exponent = 1.0;
  double center_x = 0.5;
  double center_y = 0.5;
  // soliton plus gaussians: bump_amplitude * exp(-bump_exponent r_k^2) per centre
  std::vector<double> bump_x, bump_y;
  double bump_amplitude = 0.8;
  double bump_exponent = 2.0;
  // kicked soliton: phi_s * exp(i (kick_x (x-xc) + kick_y (y-yc)))
  double kick_x = 0.0;
  double kick_y = 0.0;
  // ground state on a centred square of this side with the run's spacing; 0 means lx
  double gs_domain = 0.0;
  int gs_steps = 10;
  // evaluate the initial data in the layers as well (otherwise zero there)
  bool in_layers = true;
  std::string file;  // snapshot path for kind = file

  bool uses_ground_state() const {
    return kind == InitialKind::SolitonPlusGaussians || kind == InitialKind::KickedSoliton;
  }
};

struct OutputConfig {
  std::vector<double> snapshot_times;
  int diagnostics_every = 10;
  bool snapshots = true;
};

struct SweepConfig {
  std::vector<double> deltas;  // fractions of lx, equal widths in x and y
  ReferencePolicy reference = ReferencePolicy::None;
  std::vector<double> times;
  int spectral_factor = 4;
  SpectralSymbol spectral_symbol = SpectralSymbol::Exact;
};

struct ScenarioConfig {
  std::string name = "custom";
  CnlsCoefficients coeffs = CnlsCoefficients::scalar(1.0, 1.0, 0.0);
  NonlinearityKind nonlinearity = NonlinearityKind::None;
  DomainLayout domain;  // requested layer widths, rounded up to whole cells
  int cells_x = 100;
  int cells_y = 100;
  int desk_cells_x = 0;  // 0: same as cells
  int desk_cells_y = 0;
  PmlParameters pml;
  double dt = 0.01;
  double t_end = 1.0;
  double desk_t_end = 0.0;  // 0: same as t_end
  SolverOptions solver;
  InitialConfig initial;
  OutputConfig outputs;
  SweepConfig sweep;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Throws ConfigError with the offending key on malformed input.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<input>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical INI text; parse_config(format_config(c)) reproduces c.
std::string format_config(const ScenarioConfig& cfg);

bool same_config(const ScenarioConfig& a, const ScenarioConfig& b);

/// Resolution choice for a run: the configured grid, the desk grid and
/// desk t_end, or the configured cell counts times a factor.
struct ScaleSpec {
  enum class Mode { Paper, Desk, Factor };
  Mode mode = Mode::Paper;
  double factor = 1.0;
};

/// "paper", "desk" or a positive number.
ScaleSpec parse_scale(std::string_view text);
ScenarioConfig apply_scale(ScenarioConfig cfg, const ScaleSpec& scale);

}  // namespace pmlcnls
