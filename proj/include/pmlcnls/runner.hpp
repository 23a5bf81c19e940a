#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pmlcnls/config.hpp"
#include "pmlcnls/ground_state.hpp"
#include "pmlcnls/metrics.hpp"
#include "pmlcnls/timestepper.hpp"

namespace pmlcnls {

/// Ground states keyed by coefficients and grid, shared between the runs of a
/// sweep. Thread safe.
class GroundStateCache {
 public:
  /// Ground state on the centred square of side initial.gs_domain (default lx)
  /// with the run's spacing, or the configured one when already computed.
  std::shared_ptr<const GroundState> get(const ScenarioConfig& cfg);

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const GroundState>> cache_;
};

/// Grid of the ground state for a configuration: the spacing of the run and
/// cell counts whose difference to the run's is even, so Omega nodes coincide.
std::pair<DomainLayout, GridSpec> ground_state_grid(const ScenarioConfig& cfg);

/// Initial data on the full grid. Ground-state based data is centred in Omega.
ComplexState make_initial_state(const ScenarioConfig& cfg, const DomainLayout& layout,
                                const GridSpec& grid, GroundStateCache* cache = nullptr);

/// Analytic initial data (Gaussian kind only) for the spectral reference.
std::vector<std::function<cplx(double, double)>> analytic_initial(const ScenarioConfig& cfg);

struct PreparedRun {
  DomainLayout layout;
  GridSpec grid;
  AbsorptionProfile profile;
  StabilityReport stability;
  std::vector<SparseOperator> operators;
  ComplexState initial;
};

PreparedRun prepare_run(const ScenarioConfig& cfg, GroundStateCache* cache = nullptr);

struct RunOptions {
  bool keep_snapshots = false;
  std::function<void(const std::string&)> progress;  // diagnostics lines
  std::function<void(int, double, const ComplexState&)> on_step;
  GroundStateCache* cache = nullptr;
};

struct RunSummary {
  DomainLayout layout;
  GridSpec grid;
  StabilityReport stability;
  IntegrateResult result;
  std::optional<double> e_r;  // against the spectral reference at t_end, if configured
  double wall_seconds = 0.0;
};

/// Integrates a scenario. With a non-empty out_dir writes diagnostics.csv
/// (t,l2_omega,max_abs), profile.csv (x,sigma), snapshots/ and summary.json.
RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                        const RunOptions& options = {});

struct SweepOptions {
  std::vector<double> deltas;  // fractions of lx; empty: cfg.sweep.deltas
  std::optional<ReferencePolicy> reference;
  std::vector<double> times;  // empty: cfg.sweep.times
  int threads = 1;
  std::function<void(const std::string&)> progress;
};

struct SweepResult {
  std::vector<SweepPoint> points;              // excludes the widest-layer reference
  std::map<double, RateFit> fits;              // per measurement time
  std::vector<double> deltas;                  // realized layer widths of all runs
  std::optional<double> reference_delta;       // widest-layer policy only
  std::map<double, double> spectral_boundary;  // localization of the spectral reference
};

/// Runs one integration per layer width and measures e_r at each time against
/// the chosen reference. Throws ConfigError for a spectral reference with
/// gamma != 0.
SweepResult layer_width_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                              const SweepOptions& options = {});

void write_errors_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);
std::vector<SweepPoint> read_errors_csv(const std::filesystem::path& path);

/// sigma_x along the x grid lines of the configured full grid.
void write_profile_csv(const std::filesystem::path& path, const ScenarioConfig& cfg);

}  // namespace pmlcnls
