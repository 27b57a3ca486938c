#include "qsdecay/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsdecay {

void BarrierSpec::validate() const {
  if (!(U0 > 0)) throw std::invalid_argument("barrier: U0 must be positive");
  if (!(a >= 0)) throw std::invalid_argument("barrier: well width a must be >= 0");
  if (!(b > a)) throw std::invalid_argument("barrier: need 0 <= a < b");
  if (!(delta >= 0)) throw std::invalid_argument("barrier: delta must be >= 0");
}

double FieldSpec::duration() const {
  if (envelope == Envelope::SinSquared)
    return 2.0 * std::numbers::pi * n_cycles / omega;
  return 0.0;
}

void FieldSpec::validate() const {
  if (!(amplitude >= 0)) throw std::invalid_argument("field: amplitude must be >= 0");
  if (!(omega > 0)) throw std::invalid_argument("field: omega must be positive");
  if (envelope == Envelope::SinSquared && n_cycles < 1)
    throw std::invalid_argument("field: n_cycles must be >= 1 for sin^2 pulses");
}

QSState derive_state(const BarrierSpec& barrier, double E0) {
  barrier.validate();
  if (!(E0 > 0) || !(E0 < barrier.U0))
    throw std::domain_error("state not quasistationary: need 0 < E0 < U0");
  QSState s;
  s.E0 = E0;
  s.p0 = std::sqrt(2.0 * E0);
  s.kappa0 = std::sqrt(2.0 * (barrier.U0 - E0));
  return s;
}

DimlessParams dimensionless(const QSState& state, const FieldSpec& field,
                            const BarrierSpec& barrier) {
  DimlessParams d;
  const double A = field.amplitude, w = field.omega;
  const double L = barrier.width();
  d.K0 = state.E0 / w;
  d.Fred = A / std::pow(2.0 * state.E0, 1.5);
  d.zF = A * A / (w * w * w);
  d.gammaK = A > 0 ? state.kappa0 * w / A : std::numeric_limits<double>::infinity();
  d.mu = A * L * L / state.kappa0;
  d.pF = A / w;
  d.Lpeaks = state.p0 * d.pF / w;
  d.Up = d.pF * d.pF / 4.0;
  return d;
}

namespace {

ValidityGate gate(std::string name, bool pass, double margin, std::string detail) {
  return ValidityGate{std::move(name), pass, margin, std::move(detail)};
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ValidityGate> validity_report(const BarrierSpec& barrier,
                                          const QSState& state,
                                          const FieldSpec& field) {
  std::vector<ValidityGate> gates;
  const double A = field.amplitude;
  const double L = barrier.width();
  const double k0 = state.kappa0, p0 = state.p0;
  const DimlessParams d = dimensionless(state, field, barrier);

  // semiclassical gates
  gates.push_back(gate("multiquantum K0 >> 1", d.K0 > 3, d.K0 - 1,
                       "K0 = E0/omega = " + num(d.K0)));
  gates.push_back(gate("reduced field F << 1", d.Fred < 0.3, 1 - d.Fred,
                       "F = " + num(d.Fred)));

  // barrier-exit restriction: field work across the barrier below kappa0^2/2
  const double lhs = A * L, rhs = 0.5 * k0 * k0;
  gates.push_back(gate("tilted-barrier escape excluded (A*L < kappa0^2/2)",
                       lhs < rhs, rhs - lhs,
                       "A*L = " + num(lhs) + " vs " + num(rhs)));

  // exit kinetic energy below the instant barrier height at cos(phi0) = +-1,
  // estimated with the static exit velocity p0^2 -+ 2*A*L
  for (double c : {1.0, -1.0}) {
    const double v0sq = p0 * p0 - 2.0 * A * L * c;
    const double cap = 2.0 * (barrier.U0 - A * L * c);
    gates.push_back(gate(
        c > 0 ? "exit below barrier top (cos phi0 = +1)"
              : "exit below barrier top (cos phi0 = -1)",
        v0sq > 0 && v0sq < cap, cap - v0sq,
        "v0^2 = " + num(v0sq) + " vs 2(U0 - A*L*cos) = " + num(cap)));
  }

  // peak-count gate p0 pF >> omega (both L conventions reported)
  gates.push_back(gate("many ATI-like peaks (p0*pF >> omega)", d.Lpeaks > 3,
                       d.Lpeaks - 1,
                       "L = p0*pF/omega = " + num(d.Lpeaks) +
                           " (2L = " + num(2 * d.Lpeaks) + ")"));

  // exclusive/inclusive classification (informational)
  gates.push_back(gate("weak-field (exclusive) regime mu << 1", d.mu < 0.3,
                       1 - d.mu, "mu = " + num(d.mu)));
  return gates;
}

}  // namespace qsdecay
