#include "pmlcnls/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pmlcnls/errors.hpp"

namespace pmlcnls {

namespace pt = boost::property_tree;

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Gaussian:
      return "gaussian";
    case InitialKind::SolitonPlusGaussians:
      return "soliton_plus_gaussians";
    case InitialKind::KickedSoliton:
      return "kicked_soliton";
    case InitialKind::File:
      return "file";
  }
  return "gaussian";
}

std::string_view to_string(ReferencePolicy p) {
  switch (p) {
    case ReferencePolicy::None:
      return "none";
    case ReferencePolicy::Spectral:
      return "spectral";
    case ReferencePolicy::WidestLayer:
      return "widest";
  }
  return "none";
}

ReferencePolicy reference_policy_from_string(std::string_view name) {
  if (name == "none") return ReferencePolicy::None;
  if (name == "spectral") return ReferencePolicy::Spectral;
  if (name == "widest") return ReferencePolicy::WidestLayer;
  throw ConfigError("unknown reference policy '" + std::string(name) + "'");
}

namespace {

InitialKind initial_kind_from_string(std::string_view name) {
  for (auto k : {InitialKind::Gaussian, InitialKind::SolitonPlusGaussians,
                 InitialKind::KickedSoliton, InitialKind::File}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown initial condition type '" + std::string(name) + "'");
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A plain number, "pi" or "pi/<number>".
double parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "pi") return std::numbers::pi;
  if (s.rfind("pi/", 0) == 0) return std::numbers::pi / parse_number(s.substr(3), key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config key '" + key + "': '" + raw + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config key '" + key + "': '" + raw + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config key '" + key + "': '" + raw + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& raw, const std::string& key) {
  std::vector<double> out;
  if (trim(raw).empty()) return out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, key));
  return out;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"scenario", {"name"}},
      {"coefficients", {"alpha_x", "alpha_y", "beta", "gamma", "eps_q", "nonlinearity"}},
      {"domain", {"lx", "ly", "delta_x", "delta_y"}},
      {"grid", {"cells_x", "cells_y", "desk_cells_x", "desk_cells_y"}},
      {"pml", {"rho", "hx", "hy"}},
      {"time", {"dt", "t_end", "desk_t_end", "solver", "solver_tolerance"}},
      {"initial",
       {"type", "amplitude", "exponent", "center_x", "center_y", "bump_x", "bump_y",
        "bump_amplitude", "bump_exponent", "kick_x", "kick_y", "gs_domain", "gs_steps",
        "in_layers", "file"}},
      {"outputs", {"snapshot_times", "diagnostics_every", "snapshots"}},
      {"sweep", {"deltas", "reference", "times", "spectral_factor", "spectral_symbol"}},
  };
  return k;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }
  std::string str(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(key);
    if (!v) throw ConfigError("missing config key '" + key + "'");
    return trim(*v);
  }
  double num(const std::string& key, double def) const { return has(key) ? parse_number(str(key), key) : def; }
  double num(const std::string& key) const { return parse_number(str(key), key); }
  int integer(const std::string& key, int def) const { return has(key) ? parse_int(str(key), key) : def; }
  int integer(const std::string& key) const { return parse_int(str(key), key); }
  bool boolean(const std::string& key, bool def) const { return has(key) ? parse_bool(str(key), key) : def; }
  std::vector<double> list(const std::string& key) const { return has(key) ? parse_list(str(key), key) : std::vector<double>{}; }

 private:
  const pt::ptree& tree_;
};

void check_positions(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  domain.validate();
  pml.validate();
  (void)make_nonlinearity(nonlinearity, coeffs.eps_q(), coeffs.n_components());
  if (nonlinearity == NonlinearityKind::None && coeffs.gamma() != 0.0) {
    throw ConfigError("gamma is nonzero but the nonlinearity is 'none'");
  }
  if (cells_x < 8 || cells_y < 8) throw ConfigError("grid: at least 8 cells per direction");
  if (desk_cells_x < 0 || desk_cells_y < 0) throw ConfigError("grid: desk cells must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("time: dt must be positive");
  if (!(t_end >= dt)) throw ConfigError("time: t_end must be at least dt");
  if (!(desk_t_end == 0.0 || desk_t_end >= dt)) throw ConfigError("time: desk_t_end must be 0 or >= dt");
  if (!(solver.tolerance > 0.0)) throw ConfigError("time: solver tolerance must be positive");
  for (double t : outputs.snapshot_times) {
    if (!(t >= 0.0 && t <= t_end * (1.0 + 1e-12))) {
      throw ConfigError("outputs: snapshot time outside [0, t_end]");
    }
  }
  if (outputs.diagnostics_every < 1) throw ConfigError("outputs: diagnostics_every must be >= 1");

  const auto& ic = initial;
  if (ic.bump_x.size() != ic.bump_y.size()) throw ConfigError("initial: bump_x and bump_y differ in length");
  check_positions(ic.bump_x, "initial: bump_x");
  check_positions(ic.bump_y, "initial: bump_y");
  if (!(ic.exponent > 0.0) || !(ic.bump_exponent > 0.0)) {
    throw ConfigError("initial: Gaussian exponents must be positive");
  }
  if (ic.kind == InitialKind::File && ic.file.empty()) throw ConfigError("initial: file path missing");
  if (ic.uses_ground_state()) {
    if (!(coeffs.gamma() > 0.0)) throw ConfigError("initial: ground states need gamma > 0");
    if (coeffs.n_components() > 2) throw ConfigError("initial: ground states need 1 or 2 components");
    if (ic.gs_steps < 1) throw ConfigError("initial: gs_steps must be >= 1");
    if (ic.gs_domain != 0.0 && (ic.gs_domain < domain.lx || ic.gs_domain < domain.ly)) {
      throw ConfigError("initial: gs_domain must cover the physical domain");
    }
  }

  const auto& sw = sweep;
  for (std::size_t i = 0; i < sw.deltas.size(); ++i) {
    if (!(sw.deltas[i] > 0.0)) throw ConfigError("sweep: deltas must be positive");
    if (i > 0 && !(sw.deltas[i] > sw.deltas[i - 1])) throw ConfigError("sweep: deltas must increase strictly");
  }
  if (!sw.deltas.empty()) {
    if (sw.reference == ReferencePolicy::None) throw ConfigError("sweep: reference policy missing");
    if (sw.times.empty()) throw ConfigError("sweep: measurement times missing");
    for (double t : sw.times) {
      if (!(t > 0.0 && t <= t_end * (1.0 + 1e-12))) throw ConfigError("sweep: time outside (0, t_end]");
    }
    const std::size_t need = sw.reference == ReferencePolicy::WidestLayer ? 4 : 3;
    if (sw.deltas.size() < need) throw ConfigError("sweep: too few layer widths for a rate fit");
  }
  if (sw.reference == ReferencePolicy::Spectral) {
    if (coeffs.gamma() != 0.0) throw ConfigError("sweep: spectral reference requires gamma = 0");
    if (ic.kind != InitialKind::Gaussian) throw ConfigError("sweep: spectral reference requires Gaussian data");
  }
  if (sw.spectral_factor < 1) throw ConfigError("sweep: spectral_factor must be >= 1");
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(source + ": key '" + section + "' outside a section");
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) throw ConfigError(source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!it->second.count(key)) throw ConfigError(source + ": unknown key '" + section + "." + key + "'");
    }
  }

  const Reader r(tree);
  ScenarioConfig c;
  c.name = r.has("scenario.name") ? r.str("scenario.name") : "custom";

  auto ax = r.list("coefficients.alpha_x");
  auto ay = r.list("coefficients.alpha_y");
  auto b = r.list("coefficients.beta");
  if (ax.empty()) ax = {1.0};
  if (ay.empty()) ay = std::vector<double>(ax.size(), 1.0);
  if (b.empty()) b = std::vector<double>(ax.size(), 0.0);
  c.coeffs = CnlsCoefficients(ax, ay, b, r.num("coefficients.gamma", 0.0),
                              r.num("coefficients.eps_q", 0.0));
  c.nonlinearity = r.has("coefficients.nonlinearity")
                       ? nonlinearity_from_string(r.str("coefficients.nonlinearity"))
                       : default_nonlinearity(c.coeffs);

  c.domain.lx = r.num("domain.lx");
  c.domain.ly = r.num("domain.ly", c.domain.lx);
  c.domain.delta_x = r.num("domain.delta_x", 0.0);
  c.domain.delta_y = r.num("domain.delta_y", c.domain.delta_x);

  c.cells_x = r.integer("grid.cells_x");
  c.cells_y = r.integer("grid.cells_y", c.cells_x);
  c.desk_cells_x = r.integer("grid.desk_cells_x", 0);
  c.desk_cells_y = r.integer("grid.desk_cells_y", c.desk_cells_x);

  c.pml.rho = r.num("pml.rho", std::numbers::pi / 4.0);
  c.pml.hx = r.num("pml.hx", 0.0);
  c.pml.hy = r.num("pml.hy", c.pml.hx);

  c.dt = r.num("time.dt", 0.01);
  c.t_end = r.num("time.t_end");
  c.desk_t_end = r.num("time.desk_t_end", 0.0);
  if (r.has("time.solver")) c.solver.strategy = solver_strategy_from_string(r.str("time.solver"));
  c.solver.tolerance = r.num("time.solver_tolerance", c.solver.tolerance);

  auto& ic = c.initial;
  if (r.has("initial.type")) ic.kind = initial_kind_from_string(r.str("initial.type"));
  ic.amplitude = r.num("initial.amplitude", ic.amplitude);
  ic.exponent = r.num("initial.exponent", ic.exponent);
  ic.center_x = r.num("initial.center_x", ic.center_x);
  ic.center_y = r.num("initial.center_y", ic.center_y);
  ic.bump_x = r.list("initial.bump_x");
  ic.bump_y = r.list("initial.bump_y");
  ic.bump_amplitude = r.num("initial.bump_amplitude", ic.bump_amplitude);
  ic.bump_exponent = r.num("initial.bump_exponent", ic.bump_exponent);
  ic.kick_x = r.num("initial.kick_x", ic.kick_x);
  ic.kick_y = r.num("initial.kick_y", ic.kick_y);
  ic.gs_domain = r.num("initial.gs_domain", ic.gs_domain);
  ic.gs_steps = r.integer("initial.gs_steps", ic.gs_steps);
  ic.in_layers = r.boolean("initial.in_layers", ic.in_layers);
  if (r.has("initial.file")) ic.file = r.str("initial.file");

  c.outputs.snapshot_times = r.list("outputs.snapshot_times");
  c.outputs.diagnostics_every = r.integer("outputs.diagnostics_every", c.outputs.diagnostics_every);
  c.outputs.snapshots = r.boolean("outputs.snapshots", c.outputs.snapshots);

  c.sweep.deltas = r.list("sweep.deltas");
  if (r.has("sweep.reference")) c.sweep.reference = reference_policy_from_string(r.str("sweep.reference"));
  c.sweep.times = r.list("sweep.times");
  c.sweep.spectral_factor = r.integer("sweep.spectral_factor", c.sweep.spectral_factor);
  if (r.has("sweep.spectral_symbol")) {
    const auto s = r.str("sweep.spectral_symbol");
    if (s == "exact") {
      c.sweep.spectral_symbol = SpectralSymbol::Exact;
    } else if (s == "difference") {
      c.sweep.spectral_symbol = SpectralSymbol::FourthOrderDifference;
    } else {
      throw ConfigError("unknown spectral symbol '" + s + "'");
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(f, path.string());
}

namespace {

// Shortest round-trip form; pi and pi/N (as used for rho) symbolically.
std::string fmt(double v) {
  if (v == M_PI) return "pi";
  for (int n = 2; n <= 16; ++n) {
    if (v == M_PI / n) return "pi/" + std::to_string(n);
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

}  // namespace

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "[scenario]\nname = " << c.name << "\n\n";
  o << "[coefficients]\nalpha_x = " << fmt(c.coeffs.alpha_x()) << "\nalpha_y = " << fmt(c.coeffs.alpha_y())
    << "\nbeta = " << fmt(c.coeffs.beta()) << "\ngamma = " << fmt(c.coeffs.gamma())
    << "\neps_q = " << fmt(c.coeffs.eps_q()) << "\nnonlinearity = " << to_string(c.nonlinearity) << "\n\n";
  o << "[domain]\nlx = " << fmt(c.domain.lx) << "\nly = " << fmt(c.domain.ly)
    << "\ndelta_x = " << fmt(c.domain.delta_x) << "\ndelta_y = " << fmt(c.domain.delta_y) << "\n\n";
  o << "[grid]\ncells_x = " << c.cells_x << "\ncells_y = " << c.cells_y
    << "\ndesk_cells_x = " << c.desk_cells_x << "\ndesk_cells_y = " << c.desk_cells_y << "\n\n";
  o << "[pml]\nrho = " << fmt(c.pml.rho) << "\nhx = " << fmt(c.pml.hx) << "\nhy = " << fmt(c.pml.hy) << "\n\n";
  o << "[time]\ndt = " << fmt(c.dt) << "\nt_end = " << fmt(c.t_end) << "\ndesk_t_end = " << fmt(c.desk_t_end)
    << "\nsolver = " << to_string(c.solver.strategy) << "\nsolver_tolerance = " << fmt(c.solver.tolerance)
    << "\n\n";
  const auto& ic = c.initial;
  o << "[initial]\ntype = " << to_string(ic.kind) << "\namplitude = " << fmt(ic.amplitude)
    << "\nexponent = " << fmt(ic.exponent) << "\ncenter_x = " << fmt(ic.center_x)
    << "\ncenter_y = " << fmt(ic.center_y) << "\nbump_x = " << fmt(ic.bump_x) << "\nbump_y = " << fmt(ic.bump_y)
    << "\nbump_amplitude = " << fmt(ic.bump_amplitude) << "\nbump_exponent = " << fmt(ic.bump_exponent)
    << "\nkick_x = " << fmt(ic.kick_x) << "\nkick_y = " << fmt(ic.kick_y) << "\ngs_domain = " << fmt(ic.gs_domain)
    << "\ngs_steps = " << ic.gs_steps << "\nin_layers = " << (ic.in_layers ? "true" : "false") << "\n";
  if (!ic.file.empty()) o << "file = " << ic.file << "\n";
  o << "\n[outputs]\nsnapshot_times = " << fmt(c.outputs.snapshot_times)
    << "\ndiagnostics_every = " << c.outputs.diagnostics_every
    << "\nsnapshots = " << (c.outputs.snapshots ? "true" : "false") << "\n\n";
  o << "[sweep]\ndeltas = " << fmt(c.sweep.deltas) << "\nreference = " << to_string(c.sweep.reference)
    << "\ntimes = " << fmt(c.sweep.times) << "\nspectral_factor = " << c.sweep.spectral_factor
    << "\nspectral_symbol = "
    << (c.sweep.spectral_symbol == SpectralSymbol::Exact ? "exact" : "difference") << "\n";
  return o.str();
}

bool same_config(const ScenarioConfig& a, const ScenarioConfig& b) {
  return format_config(a) == format_config(b);
}

ScaleSpec parse_scale(std::string_view text) {
  if (text == "paper") return {ScaleSpec::Mode::Paper, 1.0};
  if (text == "desk") return {ScaleSpec::Mode::Desk, 1.0};
  const double f = parse_number(std::string(text), "--scale");
  if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("--scale must be paper, desk or a positive number");
  return {ScaleSpec::Mode::Factor, f};
}

ScenarioConfig apply_scale(ScenarioConfig c, const ScaleSpec& s) {
  switch (s.mode) {
    case ScaleSpec::Mode::Paper:
      break;
    case ScaleSpec::Mode::Desk:
      if (c.desk_cells_x > 0) c.cells_x = c.desk_cells_x;
      if (c.desk_cells_y > 0) c.cells_y = c.desk_cells_y;
      if (c.desk_t_end > 0.0) c.t_end = c.desk_t_end;
      break;
    case ScaleSpec::Mode::Factor:
      c.cells_x = std::max(8, static_cast<int>(std::lround(c.cells_x * s.factor)));
      c.cells_y = std::max(8, static_cast<int>(std::lround(c.cells_y * s.factor)));
      break;
  }
  if (s.mode == ScaleSpec::Mode::Desk) {
    std::erase_if(c.outputs.snapshot_times, [&](double t) { return t > c.t_end * (1.0 + 1e-12); });
    std::erase_if(c.sweep.times, [&](double t) { return t > c.t_end * (1.0 + 1e-12); });
  }
  c.validate();
  return c;
}

}  // namespace pmlcnls
