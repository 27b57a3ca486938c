#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "itm_internal.hpp"
#include "qsdecay/itm.hpp"

namespace qsdecay {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double pi = std::numbers::pi;

double wrap_phase(double phi) {
  double r = std::fmod(phi, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

double max_residual(const detail::TrajectoryContext& ctx, double t0,
                    double psi0, double p) {
  double F1, F2;
  if (!ctx.residuals(t0, psi0, p, F1, F2))
    return std::numeric_limits<double>::infinity();
  return std::max(std::abs(F1), std::abs(F2));
}

void push_unique(std::vector<SaddlePoint>& out, const SaddlePoint& s,
                 double t_tol) {
  for (const auto& q : out)
    if (std::abs(q.phi0 - s.phi0) < t_tol && std::abs(q.psi0 - s.psi0) < 1e-8)
      return;
  out.push_back(s);
}

// dense scan of p(phi0) over one period with bisection on sign changes;
// doubles as the production fallback when Newton seeding misses a branch
std::vector<SaddlePoint> scan_saddles(const detail::TrajectoryContext& ctx,
                                      double p, const ItmSettings& st) {
  std::vector<SaddlePoint> out;
  const double w = ctx.omega;
  const int n = st.scan_points;
  const double psi00 = ctx.L * w / ctx.kappa0;
  double prev_f = std::numeric_limits<double>::quiet_NaN();
  double prev_phi = 0, psi_guess = psi00;
  for (int i = 0; i <= n; ++i) {
    const double phi = two_pi * i / n;
    double psi_here = psi_guess;
    const double pv = ctx.p_of_t0(phi / w, psi_here, 1e-13, 60, &psi_here);
    const double f = pv - p;
    if (std::isfinite(f)) psi_guess = psi_here;
    if (std::isfinite(prev_f) && std::isfinite(f) && prev_f * f < 0) {
      double lo = prev_phi, hi = phi, flo = prev_f;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ctx.p_of_t0(mid / w, psi_guess, 1e-13, 60) - p;
        if (!std::isfinite(fm)) break;
        if (flo * fm <= 0) hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      double t0 = 0.5 * (lo + hi) / w, psi0 = psi_guess;
      if (ctx.newton(t0, psi0, p, st.newton_tol, st.max_newton_iter)) {
        SaddlePoint s;
        s.phi0 = wrap_phase(t0 * w);
        s.psi0 = psi0;
        s.v0 = std::sqrt(ctx.v0_sq(t0, psi0));
        s.residual = max_residual(ctx, s.phi0 / w, psi0, p);
        if (s.residual < 1e-10 && psi0 > 0) push_unique(out, s, 1e-7);
      }
    }
    prev_f = f;
    prev_phi = phi;
  }
  return out;
}

}  // namespace

double exit_velocity(const QSState& state, const FieldSpec& field, double phi0,
                     double psi0) {
  if (!(psi0 > 0)) throw std::domain_error("exit_velocity: psi0 must be > 0");
  const double pF = field.pF();
  const double k0 = state.kappa0, p0 = state.p0;
  const double ch = std::cosh(psi0), sh = std::sinh(psi0);
  const double cp = std::cos(phi0), sp = std::sin(phi0);
  const double r = p0 * p0 - 2.0 * k0 * pF * cp * sh +
                   pF * pF * ((ch - 1) * (ch - 1) * sp * sp - cp * cp * sh * sh);
  if (r < 0) throw std::domain_error("no real exit velocity");
  return std::sqrt(r);
}

std::vector<SaddlePoint> solve_saddles_monochromatic(
    const QSState& state, const BarrierSpec& barrier, const FieldSpec& field,
    double p, const ItmSettings& settings) {
  if (field.envelope != Envelope::Monochromatic)
    throw std::invalid_argument("solve_saddles_monochromatic: wrong envelope");
  if (!(p > 0)) return {};
  detail::TrajectoryContext ctx(state, barrier, field);
  const double w = field.omega;
  const double psi00 = barrier.width() * w / state.kappa0;

  std::vector<double> seeds = {0.1, pi - 0.1, pi + 0.1, two_pi - 0.1};
  if (field.pF() > 0) {
    // weak-field informed seeds phi0 = asin(u), pi - asin(u)
    const double u = std::clamp((p - state.p0) / field.pF(), -1.0, 1.0);
    seeds.push_back(wrap_phase(std::asin(u)));
    seeds.push_back(wrap_phase(pi - std::asin(u)));
  }

  std::vector<SaddlePoint> out;
  for (double phi : seeds) {
    double t0 = phi / w, psi0 = psi00;
    if (!ctx.newton(t0, psi0, p, settings.newton_tol, settings.max_newton_iter))
      continue;
    SaddlePoint s;
    s.phi0 = wrap_phase(t0 * w);
    s.psi0 = psi0;
    s.v0 = std::sqrt(ctx.v0_sq(s.phi0 / w, psi0));
    s.residual = max_residual(ctx, s.phi0 / w, psi0, p);
    if (s.residual < 1e-10 && psi0 > 0) push_unique(out, s, 1e-7);
  }
  if (out.size() != 2) {
    // a branch escaped the Newton seeds; the dense scan settles the count
    auto scanned = scan_saddles(ctx, p, settings);
    for (const auto& s : scanned) push_unique(out, s, 1e-7);
  }
  std::sort(out.begin(), out.end(),
            [](const SaddlePoint& a, const SaddlePoint& b) { return a.phi0 < b.phi0; });
  for (size_t i = 0; i < out.size(); ++i) out[i].alpha = int(i) + 1;
  return out;
}

std::vector<SaddlePoint> solve_saddles_pulse(const QSState& state,
                                             const BarrierSpec& barrier,
                                             const FieldSpec& field, double p,
                                             const ItmSettings& settings,
                                             std::vector<std::string>* log) {
  if (field.envelope != Envelope::SinSquared)
    throw std::invalid_argument("solve_saddles_pulse: SinSquared field required");
  detail::TrajectoryContext ctx(state, barrier, field);
  const double w = field.omega;
  const int np = field.n_cycles;
  const double Tp = field.duration();
  const double psi00 = barrier.width() * w / state.kappa0;

  std::vector<SaddlePoint> out;
  for (int m = 0; m <= 2 * np; ++m) {
    const double carrier_phi = m * pi;
    const double env = std::sin(carrier_phi / (2 * np));
    const double A_loc = field.amplitude * env * env;

    std::vector<std::pair<double, double>> seeds;  // (t0, psi0)
    if (A_loc > 1e-12 * field.amplitude) {
      // local monochromatic solution at the envelope amplitude
      FieldSpec local = field;
      local.envelope = Envelope::Monochromatic;
      local.amplitude = A_loc;
      for (const auto& s :
           solve_saddles_monochromatic(state, barrier, local, p, settings)) {
        const bool near_zero = std::cos(s.phi0) > 0;
        if (near_zero != (m % 2 == 0)) continue;
        // shift the reference-period phase onto this half-cycle
        double rel = near_zero ? (s.phi0 > pi ? s.phi0 - two_pi : s.phi0)
                               : s.phi0 - pi;
        seeds.emplace_back((carrier_phi + rel) / w, s.psi0);
      }
    }
    if (seeds.empty()) {
      seeds.emplace_back((carrier_phi + 0.3) / w, psi00);
      seeds.emplace_back((carrier_phi - 0.3) / w, psi00);
    }

    bool converged = false;
    for (auto [t0, psi0] : seeds) {
      if (t0 <= 0 || t0 >= Tp) continue;
      if (!ctx.newton(t0, psi0, p, settings.newton_tol, settings.max_newton_iter))
        continue;
      if (t0 <= 0 || t0 >= Tp || psi0 <= 0) continue;
      SaddlePoint s;
      s.alpha = m;
      s.phi0 = t0 * w;  // absolute phase within the pulse (not wrapped)
      s.psi0 = psi0;
      s.v0 = std::sqrt(ctx.v0_sq(t0, psi0));
      s.residual = max_residual(ctx, t0, psi0, p);
      if (s.residual < 1e-10) {
        push_unique(out, s, 1e-8);
        converged = true;
      }
    }
    if (!converged && log && A_loc > 1e-12 * field.amplitude)
      log->push_back("pulse saddle seed dropped at half-cycle " +
                     std::to_string(m) + " (p = " + std::to_string(p) + ")");
  }
  // at degenerate momenta (p = p0) the near-zero-envelope pulse edges admit
  // extra solutions; keep the 2*n_cycles with the largest local amplitude
  if (int(out.size()) > 2 * np) {
    std::sort(out.begin(), out.end(), [&](const SaddlePoint& a, const SaddlePoint& b) {
      const auto env = [&](double phi) {
        const double e = std::sin(phi / (2 * np));
        return e * e;
      };
      return env(a.phi0) > env(b.phi0);
    });
    out.resize(2 * np);
  }
  std::sort(out.begin(), out.end(),
            [](const SaddlePoint& a, const SaddlePoint& b) { return a.phi0 < b.phi0; });
  if (out.empty() && log)
    log->push_back("all pulse saddle seeds failed (p = " + std::to_string(p) + ")");
  return out;
}

double slope_dp_dt0(const QSState& state, const BarrierSpec& barrier,
                    const FieldSpec& field, const SaddlePoint& saddle,
                    const ItmSettings& settings, bool* fell_back) {
  detail::TrajectoryContext ctx(state, barrier, field);
  const double w = field.omega;
  const double h = settings.slope_step / w;  // phase step -> time step
  const double t0 = saddle.phi0 / w;
  const double pp = ctx.p_of_t0(t0 + h, saddle.psi0, 1e-13, 60);
  const double pm = ctx.p_of_t0(t0 - h, saddle.psi0, 1e-13, 60);
  if (fell_back) *fell_back = false;
  if (std::isfinite(pp) && std::isfinite(pm)) return (pp - pm) / (2 * h);
  // weak-field analytic slope dp/dt0 = -d pF/dt = E(t0)
  if (fell_back) *fell_back = true;
  return ctx.shape.E(t0).real();
}

std::vector<Peak> peak_momenta(const QSState& state, const FieldSpec& field,
                               double pmin, double pmax) {
  if (field.envelope != Envelope::Monochromatic)
    throw std::invalid_argument("peak_momenta: Monochromatic field required");
  const double pF = field.pF(), w = field.omega;
  const double base = state.p0 * state.p0 - pF * pF / 2;
  std::vector<Peak> out;
  const double pl = std::max(0.0, pmin);
  const int jmin = (int)std::ceil((pl * pl - base) / (2 * w));
  const int jmax = (int)std::floor((pmax * pmax - base) / (2 * w));
  for (int j = jmin; j <= jmax; ++j) {
    const double p2 = base + 2.0 * j * w;
    if (p2 <= 0) continue;
    const double p = std::sqrt(p2);
    if (p < pmin || p > pmax) continue;
    out.push_back({j, p});
  }
  return out;
}

}  // namespace qsdecay
