#ifndef QSDECAY_PIPELINE_HPP
#define QSDECAY_PIPELINE_HPP

#include <vector>

#include "qsdecay/config.hpp"
#include "qsdecay/itm.hpp"
#include "qsdecay/tdse.hpp"

// High-level runs shared by the CLI and the acceptance suite.

namespace qsdecay {

struct TdseOutputs {
  double E0 = 0;       // ground-state energy behind the infinite barrier
  RateFit fieldfree;   // fitted field-free decay rate (finite barrier)
  RateFit assisted;    // fitted rate of the laser run (when field present)
  bool has_assisted = false;
  std::vector<double> energy, dwde;  // window spectrum of the outgoing part
  NormHistory history;
  double escaped = 0;
  Wavefunction psi_final;
};

std::vector<double> energy_grid_of(const TdseNumerics& nm);

// Ground state behind the infinite barrier, sudden switch to the finite
// barrier at t = 0, propagation (with the pulse when amplitude > 0), window
// spectrum and rate fits. With infinite_barrier = true the barrier never
// switches (pure ATI reference).
TdseOutputs run_tdse_pipeline(const RunConfig& rc, bool infinite_barrier = false);

// E0 from the config, or from the gridded ground state when set to auto.
QSState resolve_state(const RunConfig& rc);

std::vector<double> pulse_p_grid(const QSState& st, const FieldSpec& f,
                                 int samples);

struct CompareOutputs {
  TdseOutputs tdse;
  QSState state;
  double R0_itm = 0;
  Spectrum itm;
  std::vector<double> energy, itm_norm, tdse_norm;  // dw/dE over field-free rates
  ComparisonReport report;
};

CompareOutputs run_compare_pipeline(const RunConfig& rc);

}  // namespace qsdecay

#endif
