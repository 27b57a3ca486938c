#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "itm_internal.hpp"
#include "qsdecay/itm.hpp"

namespace qsdecay {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr std::array<double, 8> kGlX = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlW = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <typename F>
cplx gl16(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx acc = 0;
  for (int k = 0; k < 8; ++k) {
    acc += kGlW[k] * (f(c + h * kGlX[k]) + f(c - h * kGlX[k]));
  }
  return acc * h;
}

// adaptive composite GL: double panel count until the change is below tol
template <typename F>
cplx integrate(F&& f, double a, double b, double tol) {
  int panels = 4;
  cplx prev = 0;
  for (int iter = 0; iter < 8; ++iter) {
    cplx acc = 0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) acc += gl16(f, a + k * h, a + (k + 1) * h);
    if (iter > 0 && std::abs(acc - prev) <= tol * std::max(1.0, std::abs(acc)))
      return acc;
    prev = acc;
    panels *= 2;
  }
  throw std::runtime_error(
      "action quadrature did not reach tolerance (achieved " +
      std::to_string(std::abs(prev)) + " change at " + std::to_string(panels) +
      " panels)");
}

}  // namespace

cplx field_free_action(const QSState& state, const BarrierSpec& barrier) {
  const double L = barrier.width();
  return cplx{-state.p0 * L, state.kappa0 * L};
}

double prefactor_sq(const QSState& state) {
  const double k0 = state.kappa0, p0 = state.p0;
  return 8.0 * k0 * k0 * k0 * p0 / (k0 * k0 + p0 * p0);
}

double field_free_rate(const QSState& state, const BarrierSpec& barrier) {
  return prefactor_sq(state) *
         std::exp(-2.0 * state.kappa0 * barrier.width());
}

cplx action_full(const QSState& state, const BarrierSpec& barrier,
                 const FieldSpec& field, const SaddlePoint& saddle, double p,
                 const ItmSettings& settings) {
  detail::TrajectoryContext ctx(state, barrier, field);
  const double w = field.omega;
  const double t0 = saddle.phi0 / w;
  const cplx ts = ctx.ts(t0, saddle.psi0);
  const double k0 = state.kappa0;

  // exit position (complex) and the velocity jump across the barrier edge
  const cplx xc = ctx.xI(t0, ts);
  const cplx v_in = ctx.vI(t0, ts);
  const double v0 = saddle.v0 > 0 ? saddle.v0 : std::sqrt(ctx.v0_sq(t0, saddle.psi0));
  const cplx jump = (v_in - v0) * xc;

  // vertical segment: W_I = (i/omega) int_0^psi0 (vI^2 + kappa0^2)/2 dpsi
  const auto integrand = [&](double psi) {
    const cplx v = ctx.vI(cplx(t0, psi / w), ts);
    return 0.5 * (v * v + k0 * k0);
  };
  const cplx WI =
      cplx{0, 1.0 / w} * integrate(integrand, 0.0, saddle.psi0, settings.quad_tol);

  // real axis t0 -> Tc: int (E0 - v^2/2) dt with v = p + pF(t)
  double Tc;
  if (field.envelope == Envelope::Monochromatic) {
    Tc = (two_pi / w) * std::ceil(saddle.phi0 / two_pi + 1e-12);
    if (Tc < t0) Tc += two_pi / w;
    Tc += settings.cutoff_extra_periods * two_pi / w;
  } else {
    Tc = field.duration();
  }
  const cplx GIII = ctx.shape.G(Tc) - ctx.shape.G(t0);
  const double PhiIII = ctx.shape.Phi(Tc) - ctx.shape.Phi(t0);
  const cplx WIII = (state.E0 - 0.5 * p * p) * (Tc - t0) - p * GIII - 0.5 * PhiIII;

  return jump + WI + WIII;
}

cplx action_weakfield(const QSState& state, const BarrierSpec& barrier,
                      const FieldSpec& field, double phi0, double p) {
  const double A = field.amplitude, w = field.omega;
  const double k0 = state.kappa0, p0 = state.p0;
  const double L = barrier.width();
  const double pF = field.pF();
  const double psi00 = L * w / k0;
  const double cp = std::cos(phi0), sp = std::sin(phi0);
  cplx W = cplx{0, k0 * L} *
           (1.0 + A * L * cp / (2 * k0 * k0) +
            p0 * A * psi00 * psi00 * psi00 * sp / (3 * k0 * L * w * w));
  W += p0 * (p - p0) * phi0 / w;
  W += psi00 * A * L * L * sp / (2 * k0);
  W += -p * L + pF * L * sp;
  // the coefficient of (pF/omega) cos(phi0) is p0 here: it arises from the
  // after-barrier term -p*pF*(cos(phi_c)-cos(phi0))/omega of the full action
  W += p0 * pF * cp / w;
  return W;
}

}  // namespace qsdecay
