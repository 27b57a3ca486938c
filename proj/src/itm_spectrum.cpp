#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "itm_internal.hpp"
#include "qsdecay/itm.hpp"

namespace qsdecay {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cplx sqrt_denominator(double slope, double beta, SqrtBranch branch) {
  const cplx principal = std::sqrt(cplx(slope, beta));
  if (branch == SqrtBranch::StationaryPhase && slope < 0) return -principal;
  return principal;
}

// |sum_alpha exp(i(W - i kappa0 L)) / sqrt(dp/dt0 + i beta)|^2, exponents
// shifted by the field-free Im W to keep magnitudes O(1)
double coherent_sum_sq(const std::vector<SaddlePoint>& saddles, double k0L,
                       double beta, SqrtBranch branch) {
  cplx M = 0;
  for (const auto& s : saddles) {
    const cplx shifted = s.W - cplx{0, k0L};
    M += std::exp(cplx{0, 1} * shifted) / sqrt_denominator(s.dp_dt0, beta, branch);
  }
  return std::norm(M);
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int nt = std::min(threads, n);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

Spectrum spectrum_monochromatic(const QSState& state,
                                const BarrierSpec& barrier,
                                const FieldSpec& field,
                                const ItmSettings& settings) {
  if (field.envelope != Envelope::Monochromatic)
    throw std::invalid_argument("spectrum_monochromatic: wrong envelope");
  Spectrum spec;
  spec.kind = SpectrumKind::Peaks;
  spec.barrier = barrier;
  spec.state = state;
  spec.field = field;
  spec.settings = settings;

  const double pF = field.pF(), w = field.omega;
  const double beta = std::cbrt(field.amplitude) * w;
  const double k0L = state.kappa0 * barrier.width();
  const double P02 = prefactor_sq(state);

  // scan past the naive classical boundaries: the saddle support bulges
  // slightly beyond p0 +- pF at strong field
  const double margin = 0.25 * pF + 2 * w / std::max(state.p0, 0.1);
  const double pmin = std::max(1e-6, state.p0 - pF - margin);
  const double pmax = state.p0 + pF + margin;
  auto peaks = peak_momenta(state, field, pmin, pmax);

  spec.entries.resize(peaks.size());
  std::vector<std::string> warn(peaks.size());
  parallel_for(
      int(peaks.size()), settings.threads,
      [&](int i) {
        const auto [j, pj] = peaks[i];
        SpectrumEntry e;
        e.p = pj;
        e.j = j;
        e.saddles = solve_saddles_monochromatic(state, barrier, field, pj, settings);
        for (auto& s : e.saddles) {
          s.W = action_full(state, barrier, field, s, pj, settings);
          bool fell_back = false;
          s.dp_dt0 = slope_dp_dt0(state, barrier, field, s, settings, &fell_back);
          if (fell_back && warn[i].empty())
            warn[i] = "slope fell back to the analytic weak-field form at p = " +
                      std::to_string(pj);
        }
        if (!e.saddles.empty()) {
          e.weight = w * w / (two_pi * pj) * P02 * std::exp(-2.0 * k0L) *
                     coherent_sum_sq(e.saddles, k0L, beta, settings.sqrt_branch);
        } else if (pj > state.p0 - pF && pj < state.p0 + pF) {
          warn[i] = "peak j=" + std::to_string(j) +
                    " omitted: no converged saddles inside the classical range";
        }
        spec.entries[i] = std::move(e);
      });
  for (auto& m : warn)
    if (!m.empty()) spec.warnings.push_back(m);
  // drop empty peaks outside the supported range
  std::erase_if(spec.entries,
                [](const SpectrumEntry& e) { return e.saddles.empty(); });
  return spec;
}

Spectrum spectrum_pulse(const QSState& state, const BarrierSpec& barrier,
                        const FieldSpec& field, std::span<const double> p_grid,
                        const ItmSettings& settings) {
  if (field.envelope != Envelope::SinSquared)
    throw std::invalid_argument("spectrum_pulse: SinSquared field required");
  Spectrum spec;
  spec.kind = SpectrumKind::Continuous;
  spec.barrier = barrier;
  spec.state = state;
  spec.field = field;
  spec.settings = settings;

  const double beta = std::cbrt(field.amplitude) * field.omega;
  const double k0L = state.kappa0 * barrier.width();
  const double P02 = prefactor_sq(state);

  spec.entries.resize(p_grid.size());
  std::vector<std::vector<std::string>> logs(p_grid.size());
  parallel_for(
      int(p_grid.size()), settings.threads,
      [&](int i) {
        const double p = p_grid[i];
        SpectrumEntry e;
        e.p = p;
        e.j = -1;
        if (p > 0)
          e.saddles = solve_saddles_pulse(state, barrier, field, p, settings,
                                          &logs[i]);
        for (auto& s : e.saddles) {
          s.W = action_full(state, barrier, field, s, p, settings);
          bool fell_back = false;
          s.dp_dt0 = slope_dp_dt0(state, barrier, field, s, settings, &fell_back);
          if (fell_back)
            logs[i].push_back("slope fell back to the analytic form at p = " +
                              std::to_string(p));
        }
        if (!e.saddles.empty())
          e.weight = P02 * std::exp(-2.0 * k0L) *
                     coherent_sum_sq(e.saddles, k0L, beta, settings.sqrt_branch);
        spec.entries[i] = std::move(e);
      });
  for (size_t i = 0; i < logs.size(); ++i)
    for (auto& m : logs[i])
      if (spec.warnings.size() < 50) spec.warnings.push_back(std::move(m));
  return spec;
}

RateSummary total_rate(const Spectrum& spectrum, double R0) {
  RateSummary rs;
  rs.R0 = R0;
  if (spectrum.kind == SpectrumKind::Peaks) {
    double sum = 0;
    for (const auto& e : spectrum.entries) sum += e.weight;
    rs.R = sum;
  } else {
    double integral = 0;
    for (size_t i = 0; i + 1 < spectrum.entries.size(); ++i) {
      const auto& a = spectrum.entries[i];
      const auto& b = spectrum.entries[i + 1];
      integral += 0.5 * (a.weight + b.weight) * (b.p - a.p);
    }
    const double T = spectrum.field.duration();
    rs.R = T > 0 ? integral / T : integral;
  }
  rs.ratio = R0 > 0 ? rs.R / R0 : 0;
  return rs;
}

}  // namespace qsdecay
