#ifndef QSDECAY_ITM_HPP
#define QSDECAY_ITM_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qsdecay/field.hpp"
#include "qsdecay/params.hpp"

namespace qsdecay {

// One complex start-time solution t_s = (phi0 + i psi0)/omega.
struct SaddlePoint {
  int alpha = 0;        // branch index (1 or 2 in the reference period; the
                        // half-cycle index for pulses)
  double phi0 = 0;      // real exit phase (omega * t0)
  double psi0 = 0;      // imaginary start phase, > 0
  double v0 = 0;        // exit velocity
  cplx W{0, 0};         // complex reduced action (filled during assembly)
  double dp_dt0 = 0;    // slope of p(t0) along the branch
  double residual = 0;  // max norm of the two saddle-equation residuals
};

enum class SqrtBranch {
  Principal,        // principal sqrt(dp/dt0 + i beta), phase-continued
  StationaryPhase,  // opposite sheet for dp/dt0 < 0 (textbook SPA phases)
};

struct ItmSettings {
  double newton_tol = 1e-12;   // saddle residual target
  int max_newton_iter = 100;
  double slope_step = 1e-4;    // central-difference step in phi0
  double quad_tol = 1e-10;     // subbarrier action quadrature target
  int scan_points = 1440;      // grid-scan fallback resolution per 2*pi
  int cutoff_extra_periods = 0;  // shift the monochromatic action cutoff
  SqrtBranch sqrt_branch = SqrtBranch::Principal;
  int threads = 1;             // parallelism over peaks / grid points
};

enum class SpectrumKind { Peaks, Continuous };

struct SpectrumEntry {
  double p = 0;       // final momentum
  double weight = 0;  // dR_j (Peaks) or dw/dp (Continuous)
  int j = 0;          // photon index (Peaks only)
  std::vector<SaddlePoint> saddles;
};

struct Spectrum {
  SpectrumKind kind = SpectrumKind::Peaks;
  std::vector<SpectrumEntry> entries;
  BarrierSpec barrier;
  QSState state;
  FieldSpec field;
  ItmSettings settings;
  std::vector<std::string> warnings;
};

struct RateSummary {
  double R = 0;      // total rate (Peaks) or probability/duration (Continuous)
  double R0 = 0;     // field-free rate
  double ratio = 0;  // R / R0
};

// W0 = i*kappa0*L - p0*L with L = b - a.
cplx field_free_action(const QSState& state, const BarrierSpec& barrier);

// R0 = [8 kappa0^3 p0 / (kappa0^2 + p0^2)] * exp(-2 kappa0 L)  (narrow well)
double field_free_rate(const QSState& state, const BarrierSpec& barrier);
double prefactor_sq(const QSState& state);  // the bracket above

// Exit velocity of the matched trajectory at real exit phase phi0 with
// imaginary start phase psi0 (monochromatic field). Throws std::domain_error
// "no real exit velocity" on a negative radicand.
double exit_velocity(const QSState& state, const FieldSpec& field, double phi0,
                     double psi0);

std::vector<SaddlePoint> solve_saddles_monochromatic(
    const QSState& state, const BarrierSpec& barrier, const FieldSpec& field,
    double p, const ItmSettings& settings = {});

// Up to 2*n_cycles saddles seeded per half-cycle from the local monochromatic
// solution; non-converged seeds are dropped.
std::vector<SaddlePoint> solve_saddles_pulse(const QSState& state,
                                             const BarrierSpec& barrier,
                                             const FieldSpec& field, double p,
                                             const ItmSettings& settings = {},
                                             std::vector<std::string>* log = nullptr);

// Reduced action along the L-shaped contour (vertical segment psi0 -> 0, then
// the real axis up to the cutoff: the next full-period mark for Monochromatic,
// pulse end for SinSquared).
cplx action_full(const QSState& state, const BarrierSpec& barrier,
                 const FieldSpec& field, const SaddlePoint& saddle, double p,
                 const ItmSettings& settings = {});

// Linear-in-amplitude analytic action (weak-field limit).
cplx action_weakfield(const QSState& state, const BarrierSpec& barrier,
                      const FieldSpec& field, double phi0, double p);

// Branch-following central finite difference of p(phi0), times omega. Falls
// back to the weak-field analytic slope E(t0) when the branch re-solve fails
// (fell_back reports it).
double slope_dp_dt0(const QSState& state, const BarrierSpec& barrier,
                    const FieldSpec& field, const SaddlePoint& saddle,
                    const ItmSettings& settings = {}, bool* fell_back = nullptr);

// p_j = sqrt(p0^2 - pF^2/2 + 2 j omega) for all integer j giving real p_j
// within [pmin, pmax]; returned with the j offsets.
struct Peak {
  int j;
  double p;
};
std::vector<Peak> peak_momenta(const QSState& state, const FieldSpec& field,
                               double pmin, double pmax);

Spectrum spectrum_monochromatic(const QSState& state,
                                const BarrierSpec& barrier,
                                const FieldSpec& field,
                                const ItmSettings& settings = {});

Spectrum spectrum_pulse(const QSState& state, const BarrierSpec& barrier,
                        const FieldSpec& field, std::span<const double> p_grid,
                        const ItmSettings& settings = {});

RateSummary total_rate(const Spectrum& spectrum, double R0);

}  // namespace qsdecay

#endif
