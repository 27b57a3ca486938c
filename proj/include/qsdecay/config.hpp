#ifndef QSDECAY_CONFIG_HPP
#define QSDECAY_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsdecay/itm.hpp"
#include "qsdecay/params.hpp"
#include "qsdecay/tdse.hpp"

namespace qsdecay {

enum class Engine { Itm, Tdse, Both };

// Flat view of a sectioned key=value config file ("section.key" -> value).
struct ConfigMap {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
};

struct TdseNumerics {
  double dx = 0.1;
  double x_max = 1500;
  double dt = 0.02;
  double boundary_guard = 1e-8;
  double post_pulse_time = 60;
  double window_gamma = 0;  // 0 = auto: energy_step / 2
  int window_order = 2;
  double x_cut_buffer = 20;       // outgoing part: x > b + buffer
  double fit_skip = 10;           // transient skipped before rate fits
  double fieldfree_time = 300;    // length of the field-free reference run
  double energy_min = 0.0, energy_max = 3.2, energy_step = 0.004;
};

struct RunConfig {
  BarrierSpec barrier;
  double state_energy = 0;   // <= 0 means "auto" (TDSE ground state)
  bool state_auto = false;
  FieldSpec field;
  Engine engine = Engine::Itm;
  ItmSettings itm;
  TdseNumerics tdse;
  int p_samples = 1200;
  std::string out_dir = "out";
  ConfigMap raw;  // echoed into output provenance
};

// Parse a sectioned key=value file; errors carry line numbers.
// Throws std::runtime_error on parse failure.
ConfigMap parse_config_file(const std::string& path);
ConfigMap parse_config_text(const std::string& text, const std::string& name);

// Apply "section.key=value" overrides (CLI --override).
void apply_override(ConfigMap& cfg, const std::string& assignment);

// Validate and assemble the typed config. Throws std::runtime_error with a
// descriptive message on invalid values.
RunConfig make_run_config(const ConfigMap& cfg);

}  // namespace qsdecay

#endif
