#include "qsdecay/pipeline.hpp"

#include <cmath>

namespace qsdecay {

std::vector<double> energy_grid_of(const TdseNumerics& nm) {
  std::vector<double> grid;
  for (double E = std::max(nm.energy_min, nm.energy_step);
       E <= nm.energy_max + 1e-12; E += nm.energy_step)
    grid.push_back(E);
  return grid;
}

TdseOutputs run_tdse_pipeline(const RunConfig& rc, bool infinite_barrier) {
  TdseOutputs out;
  const TdseNumerics& nm = rc.tdse;
  TdseRun run;
  run.barrier = rc.barrier;
  run.field = rc.field;
  run.grid = Grid::make(nm.x_max, nm.dx);
  run.settings.dt = nm.dt;
  run.settings.boundary_guard = nm.boundary_guard;

  const auto U_inf = build_potential(run.grid, rc.barrier, true);
  auto [psi0, E0] = ground_state(run.grid, U_inf);
  out.E0 = E0;

  // field-free reference on its own box: sized so the fastest escaping
  // components (speed ~ sqrt(2 U0)) stay clear of the boundary
  {
    const double need = std::max({4 * rc.barrier.b, 400.0,
                                  1.3 * std::sqrt(2 * rc.barrier.U0) * nm.fieldfree_time});
    const Grid small = Grid::make(std::min(nm.x_max, need), nm.dx);
    TdseRun ff;
    ff.barrier = rc.barrier;
    ff.field = rc.field;
    ff.field.amplitude = 0;
    ff.grid = small;
    ff.settings = run.settings;
    Wavefunction psi_ff;
    psi_ff.values.assign(small.n, 0);
    for (int i = 0; i < small.n; ++i) psi_ff.values[i] = psi0.values[i];
    NormHistory hist;
    hist.t.push_back(0);
    hist.well_norm.push_back(psi_ff.norm_region(small, 0, rc.barrier.b));
    propagate(ff, std::move(psi_ff), nm.fieldfree_time, &hist);
    out.fieldfree = decay_rate_fit(hist, nm.fit_skip);
  }

  // main run
  TdseRun main_run = run;
  if (infinite_barrier)
    main_run.settings.switch_time = std::numeric_limits<double>::infinity();
  Wavefunction psi = psi0;
  out.history.t.push_back(0);
  out.history.well_norm.push_back(psi.norm_region(run.grid, 0, rc.barrier.b));
  const double t_end =
      (rc.field.envelope == Envelope::SinSquared && rc.field.amplitude > 0)
          ? rc.field.duration() + nm.post_pulse_time
          : nm.fieldfree_time;
  psi = propagate(main_run, std::move(psi), t_end, &out.history);
  if (rc.field.amplitude > 0) {
    out.assisted = decay_rate_fit(out.history, nm.fit_skip);
    out.has_assisted = true;
  }

  const double x_cut = rc.barrier.b + nm.x_cut_buffer;
  out.escaped = psi.norm_region(run.grid, x_cut, run.grid.x_max);
  out.energy = energy_grid_of(nm);
  const double gamma =
      nm.window_gamma > 0 ? nm.window_gamma : nm.energy_step / 2;
  const std::vector<double> U_spec =
      infinite_barrier ? U_inf : build_potential(run.grid, rc.barrier, false);
  out.dwde = window_spectrum(run.grid, U_spec, psi, out.energy, gamma,
                             nm.window_order, x_cut);
  out.psi_final = std::move(psi);
  return out;
}

QSState resolve_state(const RunConfig& rc) {
  if (!rc.state_auto) return derive_state(rc.barrier, rc.state_energy);
  const Grid g = Grid::make(
      std::min(rc.tdse.x_max, std::max(4 * rc.barrier.b, 200.0)), rc.tdse.dx);
  const auto U = build_potential(g, rc.barrier, true);
  return derive_state(rc.barrier, ground_state(g, U).second);
}

std::vector<double> pulse_p_grid(const QSState& st, const FieldSpec& f,
                                 int samples) {
  const double pF = f.pF();
  const double lo = std::max(1e-3, st.p0 - pF - 0.1 * pF - 0.05);
  const double hi = st.p0 + pF + 0.1 * pF + 0.05;
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i)
    grid[i] = lo + (hi - lo) * i / double(samples - 1);
  return grid;
}

CompareOutputs run_compare_pipeline(const RunConfig& rc) {
  if (rc.field.envelope != Envelope::SinSquared)
    throw std::runtime_error(
        "compare: a sin2 pulse field is required (the comparison protocol is "
        "pulse-based)");
  CompareOutputs out;
  out.tdse = run_tdse_pipeline(rc);
  out.state =
      derive_state(rc.barrier, rc.state_auto ? out.tdse.E0 : rc.state_energy);
  out.R0_itm = field_free_rate(out.state, rc.barrier);

  out.energy = out.tdse.energy;
  std::vector<double> pgrid(out.energy.size());
  for (size_t i = 0; i < out.energy.size(); ++i)
    pgrid[i] = std::sqrt(2.0 * out.energy[i]);
  out.itm = spectrum_pulse(out.state, rc.barrier, rc.field, pgrid, rc.itm);

  out.itm_norm.assign(out.energy.size(), 0.0);
  out.tdse_norm.assign(out.energy.size(), 0.0);
  for (size_t i = 0; i < out.energy.size(); ++i) {
    out.itm_norm[i] = out.itm.entries[i].weight / pgrid[i] / out.R0_itm;
    out.tdse_norm[i] = out.tdse.fieldfree.rate > 0
                           ? out.tdse.dwde[i] / out.tdse.fieldfree.rate
                           : out.tdse.dwde[i];
  }

  const double pF = rc.field.pF();
  const double cb_min = 0.5 * std::pow(std::max(0.0, out.state.p0 - pF), 2);
  const double cb_max = 0.5 * std::pow(out.state.p0 + pF, 2);
  out.report = compare(out.energy, out.itm_norm, out.tdse_norm, cb_min, cb_max,
                       out.state.E0);
  return out;
}

}  // namespace qsdecay
