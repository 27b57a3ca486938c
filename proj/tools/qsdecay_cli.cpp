// Command-line frontend: ITM spectra and rates, TDSE reference runs,
// ITM-vs-TDSE comparisons, parameter sweeps. Plain-text key=value configs,
// CSV outputs with provenance headers. Atomic units throughout.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>

#include "qsdecay/config.hpp"
#include "qsdecay/csv.hpp"
#include "qsdecay/itm.hpp"
#include "qsdecay/params.hpp"
#include "qsdecay/pipeline.hpp"
#include "qsdecay/tdse.hpp"

namespace fs = std::filesystem;
using namespace qsdecay;

namespace {

bool g_verbose = false;

void vlog(const std::string& msg) {
  if (g_verbose) std::cerr << "[qsdecay] " << msg << "\n";
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& rc) {
  return {rc.raw.kv.begin(), rc.raw.kv.end()};
}

void write_validity(const fs::path& dir, const RunConfig& rc, const QSState& st) {
  CsvWriter csv((dir / "validity.csv").string(), provenance_block(config_echo(rc)),
                {"gate", "pass", "margin", "detail"});
  for (const auto& gate : validity_report(rc.barrier, st, rc.field))
    csv.raw_row(gate.name + "," + (gate.pass ? "1" : "0") + "," +
                format_si12(gate.margin) + "," + gate.detail);
  const DimlessParams d = dimensionless(st, rc.field, rc.barrier);
  csv.raw_row("# K0=" + format_si12(d.K0) + " Fred=" + format_si12(d.Fred) +
              " zF=" + format_si12(d.zF) + " gammaK=" + format_si12(d.gammaK) +
              " mu=" + format_si12(d.mu) + " Lpeaks=" + format_si12(d.Lpeaks) +
              " (2L=" + format_si12(2 * d.Lpeaks) + ") pF=" + format_si12(d.pF) +
              " Up=" + format_si12(d.Up));
  csv.close();
}

void write_rates(const fs::path& dir, const RunConfig& rc, const RateSummary& rs) {
  CsvWriter csv((dir / "rates.csv").string(), provenance_block(config_echo(rc)),
                {"R", "R0", "ratio"});
  csv.row({rs.R, rs.R0, rs.ratio});
  csv.close();
}

RateSummary cmd_itm_spectrum(const RunConfig& rc, const fs::path& dir) {
  const QSState st = resolve_state(rc);
  write_validity(dir, rc, st);
  const double R0 = field_free_rate(st, rc.barrier);

  Spectrum spec;
  if (rc.field.envelope == Envelope::Monochromatic) {
    spec = spectrum_monochromatic(st, rc.barrier, rc.field, rc.itm);
  } else {
    const auto grid = pulse_p_grid(st, rc.field, rc.p_samples);
    spec = spectrum_pulse(st, rc.barrier, rc.field, grid, rc.itm);
  }

  CsvWriter csv((dir / "spectrum.csv").string(), provenance_block(config_echo(rc)),
                {"p", "E", "weight", "ImW_1", "phi0_1", "ImW_2", "phi0_2"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : spec.entries) {
    double im1 = nan, ph1 = nan, im2 = nan, ph2 = nan;
    if (!e.saddles.empty()) {
      im1 = e.saddles[0].W.imag();
      ph1 = e.saddles[0].phi0;
    }
    if (e.saddles.size() > 1) {
      im2 = e.saddles[1].W.imag();
      ph2 = e.saddles[1].phi0;
    }
    csv.row({e.p, 0.5 * e.p * e.p, e.weight, im1, ph1, im2, ph2});
  }
  csv.close();

  CsvWriter sad((dir / "saddles.csv").string(), provenance_block(config_echo(rc)),
                {"p", "alpha", "phi0", "psi0", "v0", "ReW", "ImW", "dp_dt0",
                 "residual"});
  for (const auto& e : spec.entries)
    for (const auto& s : e.saddles)
      sad.row({e.p, double(s.alpha), s.phi0, s.psi0, s.v0, s.W.real(),
               s.W.imag(), s.dp_dt0, s.residual});
  sad.close();

  const RateSummary rs = total_rate(spec, R0);
  write_rates(dir, rc, rs);
  for (const auto& w : spec.warnings) vlog("warning: " + w);
  return rs;
}

RateSummary cmd_tdse_run(const RunConfig& rc, const fs::path& dir) {
  const TdseOutputs out = run_tdse_pipeline(rc);
  if (!out.psi_final.values.empty()) {
    const Grid g = Grid::make(rc.tdse.x_max, rc.tdse.dx);
    CsvWriter wf((dir / "wavefunction.csv").string(),
                 provenance_block(config_echo(rc)),
                 {"x", "re_psi", "im_psi", "density"});
    for (int i = 0; i < g.n; i += 5)
      wf.row({g.x(i), out.psi_final.values[i].real(),
              out.psi_final.values[i].imag(), std::norm(out.psi_final.values[i])});
    wf.close();
  }

  CsvWriter gs((dir / "ground.csv").string(), provenance_block(config_echo(rc)),
               {"E0"});
  gs.row({out.E0});
  gs.close();

  CsvWriter hist((dir / "norm_history.csv").string(),
                 provenance_block(config_echo(rc)), {"t", "well_norm"});
  for (size_t i = 0; i < out.history.t.size(); ++i)
    hist.row({out.history.t[i], out.history.well_norm[i]});
  hist.close();

  CsvWriter rates((dir / "rates.csv").string(), provenance_block(config_echo(rc)),
                  {"fieldfree_rate", "fieldfree_err95", "assisted_rate",
                   "assisted_err95"});
  rates.row({out.fieldfree.rate, out.fieldfree.stderr95,
             out.has_assisted ? out.assisted.rate : 0.0,
             out.has_assisted ? out.assisted.stderr95 : 0.0});
  rates.close();

  if (!out.energy.empty()) {
    CsvWriter spec((dir / "spectrum.csv").string(), provenance_block(config_echo(rc)),
                   {"E", "dwdE", "dwdE_over_R0"});
    for (size_t i = 0; i < out.energy.size(); ++i)
      spec.row({out.energy[i], out.dwde[i],
                out.fieldfree.rate > 0 ? out.dwde[i] / out.fieldfree.rate : 0.0});
    spec.close();
  }
  RateSummary rs;
  rs.R0 = out.fieldfree.rate;
  rs.R = out.has_assisted ? out.assisted.rate : out.fieldfree.rate;
  rs.ratio = rs.R0 > 0 ? rs.R / rs.R0 : 0;
  return rs;
}

RateSummary cmd_compare(const RunConfig& rc, const fs::path& dir) {
  const CompareOutputs out = run_compare_pipeline(rc);
  write_validity(dir, rc, out.state);
  if (out.report.cb_max > rc.tdse.energy_max || out.report.cb_min < rc.tdse.energy_min)
    std::cerr << "warning: energy grid [" << rc.tdse.energy_min << ", "
              << rc.tdse.energy_max << "] does not cover the classical boundaries ["
              << out.report.cb_min << ", " << out.report.cb_max << "]\n";

  CsvWriter overlay((dir / "overlay.csv").string(), provenance_block(config_echo(rc)),
                    {"E", "itm_dwdE_over_R0", "tdse_dwdE_over_R0"});
  for (size_t i = 0; i < out.energy.size(); ++i)
    overlay.row({out.energy[i], out.itm_norm[i], out.tdse_norm[i]});
  overlay.close();

  const ComparisonReport& rep = out.report;
  CsvWriter reptab((dir / "comparison.csv").string(),
                   provenance_block(config_echo(rc)),
                   {"log_rms_cb", "log_rms_cb_above_E0", "frac_itm_ge_tdse",
                    "ratio_at_E0", "low_energy_ratio", "shoulder_mass",
                    "total_ratio", "cb_min", "cb_max", "n_cb_samples",
                    "tdse_E0", "tdse_fieldfree_rate", "itm_R0"});
  reptab.row({rep.log_rms_cb, rep.log_rms_cb_above_E0, rep.frac_itm_ge_tdse,
              rep.ratio_at_E0, rep.low_energy_ratio, rep.shoulder_mass,
              rep.total_ratio, rep.cb_min, rep.cb_max, double(rep.n_cb_samples),
              out.tdse.E0, out.tdse.fieldfree.rate, out.R0_itm});
  reptab.close();

  RateSummary rs;
  rs.R0 = 1;
  rs.R = rep.total_ratio;
  rs.ratio = rep.total_ratio;
  return rs;
}

int cmd_sweep(const RunConfig& rc, const fs::path& dir, const std::string& param,
              const std::vector<double>& values) {
  if (values.empty()) throw std::runtime_error("sweep: empty value list");
  struct Row {
    double value = 0;
    RateSummary rs;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(values.size());

  auto run_one = [&](size_t i) {
    RunConfig r = rc;
    const double v = values[i];
    if (param == "amplitude") r.field.amplitude = v;
    else if (param == "omega") r.field.omega = v;
    else if (param == "b") r.barrier.b = v;
    else if (param == "e0") {
      r.state_energy = v;
      r.state_auto = false;
    } else throw std::runtime_error("sweep: unknown parameter '" + param + "'");
    r.barrier.validate();
    r.field.validate();
    if (rc.itm.threads > 1) r.itm.threads = 1;

    std::ostringstream name;
    name << param << "_" << v;
    const fs::path sub = dir / name.str();
    fs::create_directories(sub);
    rows[i].value = v;
    try {
      if (r.engine == Engine::Itm) rows[i].rs = cmd_itm_spectrum(r, sub);
      else if (r.engine == Engine::Tdse) rows[i].rs = cmd_tdse_run(r, sub);
      else rows[i].rs = cmd_compare(r, sub);
      rows[i].ok = true;
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  };

  if (rc.itm.threads > 1) {
    std::vector<std::future<void>> futs;
    for (size_t i = 0; i < values.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : futs) f.get();
  } else {
    for (size_t i = 0; i < values.size(); ++i) run_one(i);
  }

  CsvWriter table((dir / "sweep.csv").string(), provenance_block(config_echo(rc)),
                  {"value", "R", "R0", "ratio", "ok"});
  bool any_failed = false;
  for (const auto& row : rows) {
    table.row({row.value, row.rs.R, row.rs.R0, row.rs.ratio, row.ok ? 1.0 : 0.0});
    if (!row.ok) {
      any_failed = true;
      std::cerr << "sweep point " << param << "=" << row.value
                << " failed: " << row.error << "\n";
    }
  }
  table.close();
  return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laser-assisted decay of quasistationary states: ITM spectra "
               "and a grid TDSE reference solver (atomic units)"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  int threads = 0;
  app.add_option("--config", config_path, "config file (key=value sections)")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--override", overrides,
                 "config override section.key=value (repeatable)");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--verbose", g_verbose, "progress logging to stderr");

  auto* sc_itm = app.add_subcommand("itm-spectrum", "ITM spectrum and rates");
  auto* sc_tdse = app.add_subcommand("tdse-run", "grid TDSE run");
  auto* sc_cmp = app.add_subcommand("compare", "run both engines and compare");
  auto* sc_sweep = app.add_subcommand("sweep", "parameter sweep");
  std::string sweep_param;
  std::vector<double> sweep_values;
  sc_sweep->add_option("--param", sweep_param, "amplitude | omega | b | e0")
      ->required();
  sc_sweep->add_option("--values", sweep_values, "sweep values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  RunConfig rc;
  try {
    ConfigMap cfg = parse_config_file(config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    rc = make_run_config(cfg);
    if (!out_dir.empty()) rc.out_dir = out_dir;
    if (threads > 0) rc.itm.threads = threads;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    fs::create_directories(rc.out_dir);
    const fs::path dir = rc.out_dir;
    if (*sc_itm) {
      const RateSummary rs = cmd_itm_spectrum(rc, dir);
      std::cout << "R = " << format_si12(rs.R) << "  R0 = " << format_si12(rs.R0)
                << "  ratio = " << format_si12(rs.ratio) << "\n";
    } else if (*sc_tdse) {
      const RateSummary rs = cmd_tdse_run(rc, dir);
      std::cout << "fitted rate = " << format_si12(rs.R)
                << "  fieldfree = " << format_si12(rs.R0) << "\n";
    } else if (*sc_cmp) {
      const RateSummary rs = cmd_compare(rc, dir);
      std::cout << "itm/tdse total ratio = " << format_si12(rs.ratio) << "\n";
    } else if (*sc_sweep) {
      std::transform(sweep_param.begin(), sweep_param.end(), sweep_param.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      return cmd_sweep(rc, rc.out_dir, sweep_param, sweep_values);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
