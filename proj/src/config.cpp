#include "qsdecay/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsdecay {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string ConfigMap::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ConfigMap::get_num(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" +
                             it->second + "'");
  }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  const double v = get_num(key, fallback);
  return int(std::lround(v));
}

ConfigMap parse_config_text(const std::string& text, const std::string& name) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                 ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": empty key");
    cfg.kv[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_override(ConfigMap& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("override '" + assignment +
                             "' is not of the form section.key=value");
  const std::string key = lower(trim(assignment.substr(0, eq)));
  cfg.kv[key] = trim(assignment.substr(eq + 1));
}

RunConfig make_run_config(const ConfigMap& cfg) {
  RunConfig rc;
  rc.raw = cfg;

  rc.barrier.U0 = cfg.get_num("barrier.u0", 3.0);
  rc.barrier.a = cfg.get_num("barrier.a", 0.0);
  rc.barrier.b = cfg.get_num("barrier.b", 3.0);
  rc.barrier.delta = cfg.get_num("barrier.delta", 0.0);
  rc.barrier.validate();

  const std::string e0 = lower(cfg.get("state.e0", "auto"));
  if (e0 == "auto") {
    rc.state_auto = true;
  } else {
    rc.state_energy = cfg.get_num("state.e0", 0.0);
    if (!(rc.state_energy > 0) || !(rc.state_energy < rc.barrier.U0))
      throw std::runtime_error("config: state.e0 must satisfy 0 < E0 < U0");
  }

  rc.field.amplitude = cfg.get_num("field.amplitude", 0.0);
  rc.field.omega = cfg.get_num("field.omega", 0.1);
  const std::string env = lower(cfg.get("field.envelope", "monochromatic"));
  if (env == "monochromatic" || env == "mono")
    rc.field.envelope = Envelope::Monochromatic;
  else if (env == "sin2" || env == "sinsquared" || env == "sin^2")
    rc.field.envelope = Envelope::SinSquared;
  else
    throw std::runtime_error("config: unknown field.envelope '" + env + "'");
  rc.field.n_cycles = cfg.get_int("field.n_cycles", 6);
  rc.field.validate();

  const std::string engine = lower(cfg.get("run.engine", "itm"));
  if (engine == "itm") rc.engine = Engine::Itm;
  else if (engine == "tdse") rc.engine = Engine::Tdse;
  else if (engine == "both") rc.engine = Engine::Both;
  else throw std::runtime_error("config: unknown run.engine '" + engine + "'");

  rc.itm.newton_tol = cfg.get_num("numerics.newton_tol", rc.itm.newton_tol);
  rc.itm.slope_step = cfg.get_num("numerics.slope_step", rc.itm.slope_step);
  rc.itm.quad_tol = cfg.get_num("numerics.quad_tol", rc.itm.quad_tol);
  rc.itm.scan_points = cfg.get_int("numerics.scan_points", rc.itm.scan_points);
  rc.itm.threads = cfg.get_int("numerics.threads", 1);
  const std::string br = lower(cfg.get("numerics.sqrt_branch", "principal"));
  if (br == "principal") rc.itm.sqrt_branch = SqrtBranch::Principal;
  else if (br == "stationary_phase" || br == "spa")
    rc.itm.sqrt_branch = SqrtBranch::StationaryPhase;
  else throw std::runtime_error("config: unknown numerics.sqrt_branch '" + br + "'");

  rc.tdse.dx = cfg.get_num("numerics.dx", rc.tdse.dx);
  rc.tdse.x_max = cfg.get_num("numerics.x_max", rc.tdse.x_max);
  rc.tdse.dt = cfg.get_num("numerics.dt", rc.tdse.dt);
  rc.tdse.boundary_guard =
      cfg.get_num("numerics.boundary_guard", rc.tdse.boundary_guard);
  rc.tdse.post_pulse_time =
      cfg.get_num("numerics.post_pulse_time", rc.tdse.post_pulse_time);
  rc.tdse.window_gamma = cfg.get_num("numerics.window_gamma", rc.tdse.window_gamma);
  rc.tdse.window_order = cfg.get_int("numerics.window_order", rc.tdse.window_order);
  rc.tdse.x_cut_buffer = cfg.get_num("numerics.x_cut_buffer", rc.tdse.x_cut_buffer);
  rc.tdse.fit_skip = cfg.get_num("numerics.fit_skip", rc.tdse.fit_skip);
  rc.tdse.fieldfree_time =
      cfg.get_num("numerics.fieldfree_time", rc.tdse.fieldfree_time);
  rc.tdse.energy_min = cfg.get_num("numerics.energy_min", rc.tdse.energy_min);
  rc.tdse.energy_max = cfg.get_num("numerics.energy_max", rc.tdse.energy_max);
  rc.tdse.energy_step = cfg.get_num("numerics.energy_step", rc.tdse.energy_step);

  rc.p_samples = cfg.get_int("numerics.p_samples", rc.p_samples);
  if (rc.p_samples < 2) throw std::runtime_error("config: p_samples must be >= 2");
  rc.out_dir = cfg.get("output.dir", "out");
  return rc;
}

}  // namespace qsdecay
