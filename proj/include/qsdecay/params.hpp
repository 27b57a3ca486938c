#ifndef QSDECAY_PARAMS_HPP
#define QSDECAY_PARAMS_HPP

#include <optional>
#include <string>
#include <vector>

// All quantities in atomic units (hbar = m_e = |e| = 1).

namespace qsdecay {

// Rectangular well/barrier geometry: U = 0 on [0, a] (well), U = U0 on
// (a, b] (barrier), U = 0 beyond b. delta > 0 replaces the outer step by a
// linear slope of that width (used only by the matching oracle; delta = 0 is
// the exact rectangular limit).
struct BarrierSpec {
  double U0 = 3.0;     // barrier height
  double a = 0.0;      // well width
  double b = 3.0;      // barrier outer edge position
  double delta = 0.0;  // slope width of the triangular edge

  // tunneling length seen by the quasistationary state
  double width() const { return b - a; }
  void validate() const;  // throws std::invalid_argument
};

// Derived quasistationary-state quantities.
struct QSState {
  double E0 = 0;       // real part of the state energy
  double p0 = 0;       // asymptotic momentum sqrt(2 E0)
  double kappa0 = 0;   // subbarrier momentum sqrt(2 (U0 - E0))
  std::optional<double> gamma_width;  // width Gamma, informational only
};

enum class Envelope { Monochromatic, SinSquared };

struct FieldSpec {
  double amplitude = 0.0;  // peak field E0
  double omega = 0.1;      // carrier frequency
  Envelope envelope = Envelope::Monochromatic;
  int n_cycles = 6;        // used only for SinSquared

  double pF() const { return omega > 0 ? amplitude / omega : 0.0; }
  // pulse duration 2*pi*n_cycles/omega (SinSquared); 0 for Monochromatic
  double duration() const;
  void validate() const;
};

// Dimensionless diagnostics of the (state, field) combination.
struct DimlessParams {
  double K0 = 0;      // multiquantum parameter E0/omega
  double Fred = 0;    // reduced field amplitude / (2 E0)^{3/2}
  double zF = 0;      // Reiss parameter amplitude^2/omega^3
  double gammaK = 0;  // kappa0*omega/amplitude (Keldysh-type)
  double mu = 0;      // weak-field criterion amplitude*L^2/kappa0, L = b - a
  double Lpeaks = 0;  // peak-count estimate p0*pF/omega
  double pF = 0;      // field momentum amplitude/omega
  double Up = 0;      // ponderomotive energy pF^2/4 (Monochromatic)
};

struct ValidityGate {
  std::string name;
  bool pass = true;
  double margin = 0;  // positive = satisfied by this much
  std::string detail;
};

// E0 -> (p0, kappa0); throws std::domain_error("state not quasistationary")
// unless 0 < E0 < U0.
QSState derive_state(const BarrierSpec& barrier, double E0);

DimlessParams dimensionless(const QSState& state, const FieldSpec& field,
                            const BarrierSpec& barrier);

// Named pass/fail gates with numeric margins; never aborts computation.
std::vector<ValidityGate> validity_report(const BarrierSpec& barrier,
                                          const QSState& state,
                                          const FieldSpec& field);

}  // namespace qsdecay

#endif
