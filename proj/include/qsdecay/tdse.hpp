#ifndef QSDECAY_TDSE_HPP
#define QSDECAY_TDSE_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qsdecay/field.hpp"
#include "qsdecay/itm.hpp"
#include "qsdecay/params.hpp"

namespace qsdecay {

// Uniform grid on [0, x_max]; the hard wall is the Dirichlet node at x = 0.
struct Grid {
  double x_min = 0;
  double x_max = 1500;
  double dx = 0.1;
  int n = 0;

  static Grid make(double x_max, double dx);
  double x(int i) const { return x_min + i * dx; }
  int index(double x) const;
};

struct Wavefunction {
  std::vector<cplx> values;
  double t = 0;

  double norm(const Grid& g) const;
  double norm_region(const Grid& g, double xlo, double xhi) const;
};

enum class Gauge { Length };

struct TdseSettings {
  double dt = 0.02;
  double boundary_guard = 1e-8;  // abort threshold for |psi| at x_max
  double switch_time = 0;        // infinite -> finite barrier switch
  double history_stride = 0.5;   // well-norm sampling interval (a.u. time)
  Gauge gauge = Gauge::Length;
};

struct TdseRun {
  BarrierSpec barrier;
  FieldSpec field;
  Grid grid;
  TdseSettings settings;
};

struct NormHistory {
  std::vector<double> t;
  std::vector<double> well_norm;  // norm over x <= barrier outer edge
};

// Potential samples on the grid: U = 0 on [0, a], U = U0 on (a, b]
// (or (a, x_max] when infinite); U = 0 beyond. Throws if b is off-grid or
// the well is degenerate (a = 0).
std::vector<double> build_potential(const Grid& grid, const BarrierSpec& barrier,
                                    bool infinite);

// Lowest eigenpair by imaginary-time relaxation of the propagation
// Hamiltonian (3-point Laplacian). Returns the normalized state and energy.
std::pair<Wavefunction, double> ground_state(const Grid& grid,
                                             const std::vector<double>& U,
                                             double drift_tol = 1e-10);

// Crank-Nicolson propagation of H(t) = -1/2 d2/dx2 + U(x) + x E(t) from
// psi.t to t_end. The potential switches from the infinite to the finite
// barrier at settings.switch_time. Throws std::runtime_error("grid too
// small ...") if |psi(x_max)| exceeds the boundary guard.
Wavefunction propagate(const TdseRun& run, Wavefunction psi, double t_end,
                       NormHistory* history = nullptr);

// Window-operator spectral density dw/dE on energy_grid: the expectation of
// gamma^{2^n} / [(H-E)^{2^n} + gamma^{2^n}] over psi restricted to
// x > x_cut, normalized so its integral equals the restricted norm.
std::vector<double> window_spectrum(const Grid& grid,
                                    const std::vector<double>& U,
                                    const Wavefunction& psi,
                                    std::span<const double> energy_grid,
                                    double gamma_w, int order_n, double x_cut);

struct RateFit {
  double rate = 0;
  double stderr95 = 0;  // 95% uncertainty of the slope
  bool monotone = true; // N(t) monotone within the fit window
};

// Least-squares slope of ln N(t) for t >= t_start.
RateFit decay_rate_fit(const NormHistory& history, double t_start);

struct ComparisonReport {
  double log_rms_cb = 0;        // RMS of ln(itm/tdse) within the CB
  double log_rms_cb_above_E0 = 0;
  double frac_itm_ge_tdse = 0;  // fraction of within-CB samples with itm >= tdse
  double ratio_at_E0 = 0;
  double low_energy_ratio = 0;  // median itm/tdse for E < 0.8 (within CB)
  double shoulder_mass = 0;     // tdse mass outside the CB / total
  double total_ratio = 0;       // integrated itm / integrated tdse
  double cb_min = 0, cb_max = 0;
  int n_cb_samples = 0;
};

// Both inputs must already be normalized to their field-free decay rates and
// given as dw/dE on the same energy grid.
ComparisonReport compare(std::span<const double> energy_grid,
                         std::span<const double> itm_dwde,
                         std::span<const double> tdse_dwde, double cb_min,
                         double cb_max, double E0);

}  // namespace qsdecay

#endif
