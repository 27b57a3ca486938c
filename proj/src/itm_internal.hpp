#ifndef QSDECAY_ITM_INTERNAL_HPP
#define QSDECAY_ITM_INTERNAL_HPP

#include <cmath>
#include <optional>

#include "qsdecay/field.hpp"
#include "qsdecay/itm.hpp"

// Shared trajectory machinery for both field models. Dimensional time t is
// used throughout; phases phi0/psi0 convert via omega.

namespace qsdecay::detail {

struct TrajectoryContext {
  double kappa0, p0, U0, L, omega;
  FieldShape shape;

  TrajectoryContext(const QSState& s, const BarrierSpec& b, const FieldSpec& f)
      : kappa0(s.kappa0),
        p0(s.p0),
        U0(b.U0),
        L(b.width()),
        omega(f.omega),
        shape(f) {}

  cplx ts(double t0, double psi0) const { return {t0, psi0 / omega}; }

  // subbarrier velocity and position (region I closed forms)
  cplx vI(cplx t, cplx ts_) const {
    return cplx{0, kappa0} + shape.pF(t) - shape.pF(ts_);
  }
  cplx xI(cplx t, cplx ts_) const {
    return cplx{0, kappa0} * (t - ts_) + shape.G(t) - shape.G(ts_) -
           shape.pF(ts_) * (t - ts_);
  }

  // exit-velocity radicand Re[vI(t0)^2] + 2 U0 (negative -> saddle rejected)
  double v0_sq(double t0, double psi0) const {
    const cplx v = vI(t0, ts(t0, psi0));
    return (v * v).real() + 2.0 * U0;
  }

  // saddle residuals: F1 = Re[xI(t0)] - L, F2 = v0 - pF(t0) - p
  bool residuals(double t0, double psi0, double p, double& F1,
                 double& F2) const {
    const cplx tss = ts(t0, psi0);
    F1 = xI(t0, tss).real() - L;
    const double r = v0_sq(t0, psi0);
    if (r < 0) return false;
    F2 = std::sqrt(r) - shape.pF(t0).real() - p;
    return true;
  }

  // analytic Jacobian of (F1, F2) w.r.t. (t0, psi0)
  bool jacobian(double t0, double psi0, double J[4]) const {
    const cplx tss = ts(t0, psi0);
    const cplx Ets = shape.E(tss);
    const cplx Et0 = shape.E(t0);
    const cplx dts_dpsi{0, 1.0 / omega};
    const cplx dt = cplx(t0, 0) - tss;
    // dxI/dt0 = [pF(t0) - pF(ts)] + E(ts) (t0-ts)
    const cplx pft0 = shape.pF(t0), pfts = shape.pF(tss);
    const cplx dxI_dt0 = (pft0 - pfts) + Ets * dt;
    // dxI/dpsi0 = kappa0/omega + (i/omega) E(ts) (t0-ts)
    const cplx dxI_dpsi = cplx{kappa0 / omega, 0} + dts_dpsi * Ets * dt;
    J[0] = dxI_dt0.real();
    J[1] = dxI_dpsi.real();
    const cplx v = cplx{0, kappa0} + pft0 - pfts;
    const double r = (v * v).real() + 2.0 * U0;
    if (r <= 0) return false;
    const double v0 = std::sqrt(r);
    // dvI/dt0 = -E(t0) + E(ts); dvI/dpsi0 = (i/omega) E(ts)
    const cplx dv_dt0 = -Et0 + Ets;
    const cplx dv_dpsi = dts_dpsi * Ets;
    J[2] = (v * dv_dt0).real() / v0 + Et0.real();
    J[3] = (v * dv_dpsi).real() / v0;
    return true;
  }

  // 1D solve of F1(t0, psi0) = 0 for psi0 at fixed t0 (Newton with step
  // limiting); returns nullopt on failure.
  std::optional<double> solve_psi0(double t0, double guess, double tol,
                                   int max_iter) const {
    double psi = guess > 0 ? guess : L * omega / kappa0;
    for (int it = 0; it < max_iter; ++it) {
      const cplx tss = ts(t0, psi);
      const double F1 = xI(t0, tss).real() - L;
      const cplx Ets = shape.E(tss);
      const cplx dt = cplx(t0, 0) - tss;
      const double dF =
          kappa0 / omega + (cplx{0, 1.0 / omega} * Ets * dt).real();
      if (std::abs(dF) < 1e-300) return std::nullopt;
      double step = F1 / dF;
      const double lim = 0.5 * std::abs(psi) + 0.05;
      if (std::abs(step) > lim) step = std::copysign(lim, step);
      psi -= step;
      if (psi <= 0) psi = 1e-12;
      if (std::abs(F1) < tol && std::abs(step) < tol) return psi;
    }
    const double F1 = xI(t0, ts(t0, psi)).real() - L;
    if (std::abs(F1) < 1e-9) return psi;
    return std::nullopt;
  }

  // drift momentum of the branch passing through exit time t0 (solving the
  // x-matching equation for psi0 first); NaN when no real exit velocity
  double p_of_t0(double t0, double psi_guess, double tol, int max_iter,
                 double* psi_out = nullptr) const {
    const auto psi = solve_psi0(t0, psi_guess, tol, max_iter);
    if (!psi) return std::numeric_limits<double>::quiet_NaN();
    if (psi_out) *psi_out = *psi;
    const double r = v0_sq(t0, *psi);
    if (r < 0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(r) - shape.pF(t0).real();
  }

  // damped 2D Newton from (t0, psi0); true on convergence
  bool newton(double& t0, double& psi0, double p, double tol,
              int max_iter) const {
    for (int it = 0; it < max_iter; ++it) {
      double F1, F2;
      if (!residuals(t0, psi0, p, F1, F2)) return false;
      if (std::abs(F1) < tol && std::abs(F2) < tol) return true;
      double J[4];
      if (!jacobian(t0, psi0, J)) return false;
      const double det = J[0] * J[3] - J[1] * J[2];
      if (std::abs(det) < 1e-300) return false;
      double d0 = (F1 * J[3] - F2 * J[1]) / det;
      double d1 = (J[0] * F2 - J[2] * F1) / det;
      const double lim_t = 0.6 / omega, lim_psi = 0.3;
      if (std::abs(d0) > lim_t) d0 = std::copysign(lim_t, d0);
      if (std::abs(d1) > lim_psi) d1 = std::copysign(lim_psi, d1);
      t0 -= d0;
      psi0 -= d1;
      if (psi0 <= 0) psi0 = 1e-12;
    }
    double F1, F2;
    return residuals(t0, psi0, p, F1, F2) && std::abs(F1) < tol &&
           std::abs(F2) < tol;
  }
};

}  // namespace qsdecay::detail

#endif
