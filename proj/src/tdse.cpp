#include "qsdecay/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qsdecay {

namespace {

// Thomas solve of a tridiagonal system with constant off-diagonal `off` over
// the interior nodes [1, n-2]; boundary nodes stay zero (Dirichlet walls).
void solve_tridiag_interior(const std::vector<cplx>& diag, cplx off,
                            const std::vector<cplx>& rhs,
                            std::vector<cplx>& out, std::vector<cplx>& cp,
                            std::vector<cplx>& dp) {
  const int n = int(diag.size());
  cp[1] = off / diag[1];
  dp[1] = rhs[1] / diag[1];
  for (int i = 2; i + 1 < n; ++i) {
    const cplx m = diag[i] - off * cp[i - 1];
    cp[i] = off / m;
    dp[i] = (rhs[i] - off * dp[i - 1]) / m;
  }
  out[0] = out[n - 1] = 0;
  out[n - 2] = dp[n - 2];
  for (int i = n - 3; i >= 1; --i) out[i] = dp[i] - cp[i] * out[i + 1];
}

}  // namespace

Grid Grid::make(double x_max, double dx) {
  if (!(dx > 0) || !(x_max > dx)) throw std::invalid_argument("grid: bad extent");
  Grid g;
  g.x_max = x_max;
  g.dx = dx;
  g.n = int(std::lround(x_max / dx)) + 1;
  return g;
}

int Grid::index(double xq) const {
  return std::clamp(int(std::lround((xq - x_min) / dx)), 0, n - 1);
}

double Wavefunction::norm(const Grid& g) const {
  double s = 0;
  for (const auto& v : values) s += std::norm(v);
  return s * g.dx;
}

double Wavefunction::norm_region(const Grid& g, double xlo, double xhi) const {
  double s = 0;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (x >= xlo && x <= xhi) s += std::norm(values[i]);
  }
  return s * g.dx;
}

std::vector<double> build_potential(const Grid& grid, const BarrierSpec& barrier,
                                    bool infinite) {
  barrier.validate();
  if (barrier.a <= 0)
    throw std::invalid_argument(
        "build_potential: degenerate well (a = 0); the grid solver needs a "
        "finite well width");
  if (barrier.b >= grid.x_max)
    throw std::invalid_argument("build_potential: barrier edge b outside grid");
  std::vector<double> U(grid.n, 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x > barrier.a && (infinite || x <= barrier.b)) U[i] = barrier.U0;
  }
  return U;
}

namespace {

double energy_expectation(const Grid& g, const std::vector<double>& U,
                          const std::vector<cplx>& f) {
  const double idx2 = 1.0 / (g.dx * g.dx);
  double num = 0, den = 0;
  for (int i = 1; i + 1 < g.n; ++i) {
    const cplx lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * idx2;
    num += std::real(std::conj(f[i]) * (-0.5 * lap + U[i] * f[i]));
    den += std::norm(f[i]);
  }
  return num / den;
}

}  // namespace

std::pair<Wavefunction, double> ground_state(const Grid& grid,
                                             const std::vector<double>& U,
                                             double drift_tol) {
  Wavefunction wf;
  wf.values.assign(grid.n, 0);
  // seed: half-sine over the well region (first zero of U)
  int well_end = 1;
  while (well_end + 1 < grid.n && U[well_end] == 0.0) ++well_end;
  const double aw = grid.x(std::max(well_end, 2));
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x < aw) wf.values[i] = std::sin(std::numbers::pi * x / aw);
  }

  // backward-Euler imaginary-time step (1 + tau H) psi' = psi: the damping
  // factor 1/(1 + tau E) decreases monotonically with E, so stiff barrier
  // plateaus cannot ring
  const double tau = 0.05;
  const double idx2 = 1.0 / (grid.dx * grid.dx);
  std::vector<cplx> diag(grid.n), rhs(grid.n), cp(grid.n), dp(grid.n);
  const cplx off = -0.5 * idx2 * tau;
  for (int i = 0; i < grid.n; ++i) diag[i] = 1.0 + tau * (idx2 + U[i]);

  double Eprev = std::numeric_limits<double>::max();
  for (int it = 0; it < 200000; ++it) {
    for (int i = 1; i + 1 < grid.n; ++i) rhs[i] = wf.values[i];
    rhs[0] = rhs[grid.n - 1] = 0;
    solve_tridiag_interior(diag, off, rhs, wf.values, cp, dp);
    double s = 0;
    for (const auto& v : wf.values) s += std::norm(v);
    s = std::sqrt(s * grid.dx);
    if (!(s > 0)) throw std::runtime_error("ground_state: relaxation collapsed");
    for (auto& v : wf.values) v /= s;
    if (it % 8 == 7) {
      const double E = energy_expectation(grid, U, wf.values);
      if (std::abs(E - Eprev) < drift_tol) return {std::move(wf), E};
      Eprev = E;
    }
  }
  throw std::runtime_error("ground_state: imaginary-time relaxation did not converge");
}

Wavefunction propagate(const TdseRun& run, Wavefunction psi, double t_end,
                       NormHistory* history) {
  const Grid& g = run.grid;
  if (int(psi.values.size()) != g.n)
    throw std::invalid_argument("propagate: wavefunction/grid size mismatch");
  const double dt = run.settings.dt;
  if (!(dt > 0)) throw std::invalid_argument("propagate: dt must be positive");
  const double idx2 = 1.0 / (g.dx * g.dx);
  const FieldShape shape(run.field);

  const std::vector<double> U_inf = build_potential(g, run.barrier, true);
  const std::vector<double> U_fin = build_potential(g, run.barrier, false);

  std::vector<cplx> diag(g.n), rhs(g.n), cp(g.n), dp(g.n);

  double next_sample = history && history->t.empty() ? psi.t : 0;
  if (history && !history->t.empty())
    next_sample = history->t.back() + run.settings.history_stride;

  const int guard_span = std::max(2, int(std::lround(1.0 / g.dx)));
  while (psi.t < t_end - 1e-12) {
    const double step = std::min(dt, t_end - psi.t);
    const double tm = psi.t + 0.5 * step;
    const std::vector<double>& U =
        (tm < run.settings.switch_time) ? U_inf : U_fin;
    const double El = shape.E(tm).real();
    const cplx ih = cplx{0, 0.5 * step};
    const cplx offs = ih * (-0.5 * idx2);
    for (int i = 0; i < g.n; ++i) {
      const double Hd = idx2 + U[i] + g.x(i) * El;
      diag[i] = 1.0 + ih * Hd;
      const cplx nb = (i > 0 ? psi.values[i - 1] : cplx{}) +
                      (i + 1 < g.n ? psi.values[i + 1] : cplx{});
      const cplx Hpsi = Hd * psi.values[i] - 0.5 * idx2 * nb;
      rhs[i] = psi.values[i] - ih * Hpsi;
    }
    solve_tridiag_interior(diag, offs, rhs, psi.values, cp, dp);
    psi.t += step;

    double edge = 0;
    for (int i = g.n - guard_span; i < g.n; ++i)
      edge = std::max(edge, std::abs(psi.values[i]));
    if (edge > run.settings.boundary_guard) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "grid too small: |psi| at the boundary reached %.3e at t = %.2f",
                    edge, psi.t);
      throw std::runtime_error(msg);
    }

    if (history && psi.t >= next_sample - 1e-12) {
      history->t.push_back(psi.t);
      history->well_norm.push_back(psi.norm_region(g, 0, run.barrier.b));
      next_sample += run.settings.history_stride;
    }
  }
  return psi;
}

std::vector<double> window_spectrum(const Grid& grid,
                                    const std::vector<double>& U,
                                    const Wavefunction& psi,
                                    std::span<const double> energy_grid,
                                    double gamma_w, int order_n, double x_cut) {
  if (order_n != 1 && order_n != 2)
    throw std::invalid_argument("window_spectrum: order_n must be 1 or 2");
  const double idx2 = 1.0 / (grid.dx * grid.dx);

  std::vector<cplx> f(grid.n, 0);
  double restricted_norm = 0;
  for (int i = 0; i < grid.n; ++i) {
    if (grid.x(i) > x_cut) {
      f[i] = psi.values[i];
      restricted_norm += std::norm(psi.values[i]);
    }
  }
  restricted_norm *= grid.dx;

  // roots of z^{2^n} = -gamma^{2^n}: n=2 -> primitive 8th roots of unity
  std::vector<cplx> roots;
  const int m = order_n == 2 ? 4 : 2;
  for (int k = 0; k < m; ++k) {
    const double arg = std::numbers::pi * (2 * k + 1) / m;
    roots.push_back(gamma_w * std::exp(cplx{0, arg}));
  }

  std::vector<double> out(energy_grid.size(), 0.0);
  std::vector<cplx> diag(grid.n), cp(grid.n), dp(grid.n), u(grid.n), v(grid.n);
  const cplx off = cplx{-0.5 * idx2, 0};
  for (size_t k = 0; k < energy_grid.size(); ++k) {
    const double E = energy_grid[k];
    u = f;
    for (const cplx& nu : roots) {
      for (int i = 0; i < grid.n; ++i) diag[i] = (idx2 + U[i]) - E - nu;
      solve_tridiag_interior(diag, off, u, v, cp, dp);
      std::swap(u, v);
    }
    cplx acc = 0;
    for (int i = 0; i < grid.n; ++i) acc += std::conj(f[i]) * u[i];
    out[k] = std::pow(gamma_w, m) * std::real(acc) * grid.dx;
  }

  // normalize so the integral over the energy grid equals the escaped norm
  double integral = 0;
  for (size_t k = 0; k + 1 < energy_grid.size(); ++k)
    integral +=
        0.5 * (out[k] + out[k + 1]) * (energy_grid[k + 1] - energy_grid[k]);
  if (integral > 0) {
    const double scale = restricted_norm / integral;
    for (auto& vv : out) vv *= scale;
  }
  return out;
}

RateFit decay_rate_fit(const NormHistory& history, double t_start) {
  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  double prev = std::numeric_limits<double>::max();
  for (size_t i = 0; i < history.t.size(); ++i) {
    if (history.t[i] < t_start) continue;
    const double N = history.well_norm[i];
    if (!(N > 0)) continue;
    if (N > prev * (1 + 1e-9)) fit.monotone = false;
    prev = N;
    const double x = history.t[i], y = std::log(N);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::invalid_argument("decay_rate_fit: too few samples");
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < history.t.size(); ++i) {
    if (history.t[i] < t_start || !(history.well_norm[i] > 0)) continue;
    const double r =
        std::log(history.well_norm[i]) - (intercept + slope * history.t[i]);
    ss += r * r;
  }
  const double var_slope = n > 2 ? ss / (n - 2) * n / det : 0;
  fit.rate = -slope;
  fit.stderr95 = 1.96 * std::sqrt(std::max(0.0, var_slope));
  return fit;
}

ComparisonReport compare(std::span<const double> energy_grid,
                         std::span<const double> itm_dwde,
                         std::span<const double> tdse_dwde, double cb_min,
                         double cb_max, double E0) {
  if (energy_grid.size() != itm_dwde.size() ||
      energy_grid.size() != tdse_dwde.size())
    throw std::invalid_argument("compare: grid size mismatch");
  ComparisonReport rep;
  rep.cb_min = cb_min;
  rep.cb_max = cb_max;

  double ss = 0, ss_hi = 0;
  int n = 0, n_hi = 0, n_ge = 0;
  std::vector<double> low_ratios;
  double tdse_total = 0, tdse_out = 0, itm_total = 0;
  double best_dE0 = std::numeric_limits<double>::max();
  for (size_t k = 0; k < energy_grid.size(); ++k) {
    const double E = energy_grid[k];
    const double it = itm_dwde[k], td = tdse_dwde[k];
    if (k + 1 < energy_grid.size()) {
      const double dE = energy_grid[k + 1] - energy_grid[k];
      tdse_total += td * dE;
      itm_total += it * dE;
      if (E < cb_min || E > cb_max) tdse_out += td * dE;
    }
    if (E < cb_min || E > cb_max) continue;
    if (std::abs(E - E0) < best_dE0 && td > 0) {
      best_dE0 = std::abs(E - E0);
      rep.ratio_at_E0 = it / td;
    }
    if (!(it > 0) || !(td > 0)) continue;
    const double d = std::log(it / td);
    ss += d * d;
    ++n;
    if (it >= td) ++n_ge;
    if (E >= E0) {
      ss_hi += d * d;
      ++n_hi;
    }
    if (E < 0.8) low_ratios.push_back(it / td);
  }
  rep.n_cb_samples = n;
  rep.log_rms_cb = n > 0 ? std::sqrt(ss / n) : 0;
  rep.log_rms_cb_above_E0 = n_hi > 0 ? std::sqrt(ss_hi / n_hi) : 0;
  rep.frac_itm_ge_tdse = n > 0 ? double(n_ge) / n : 0;
  if (!low_ratios.empty()) {
    std::sort(low_ratios.begin(), low_ratios.end());
    rep.low_energy_ratio = low_ratios[low_ratios.size() / 2];
  }
  rep.shoulder_mass = tdse_total > 0 ? tdse_out / tdse_total : 0;
  rep.total_ratio = tdse_total > 0 ? itm_total / tdse_total : 0;
  return rep;
}

}  // namespace qsdecay
