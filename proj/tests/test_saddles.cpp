#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qsdecay/itm.hpp"
#include "qsdecay/params.hpp"

using namespace qsdecay;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2 * pi;
const cplx I{0, 1};

// ---------------------------------------------------------------------------
// Independent oracles. These re-derive everything from the closed-form
// monochromatic trajectories (bisection only, no shared code with the
// production Newton solver).
// ---------------------------------------------------------------------------

struct Mono {
  double U0, L, E0, w, A;
  double p0() const { return std::sqrt(2 * E0); }
  double k0() const { return std::sqrt(2 * (U0 - E0)); }
  double pF() const { return A / w; }

  cplx vI(cplx phi, cplx phis) const {
    return I * k0() - pF() * (std::sin(phi) - std::sin(phis));
  }
  cplx xI(cplx phi, cplx phis) const {
    return (A / (w * w)) * ((I * (k0() / pF()) + std::sin(phis)) * (phi - phis) +
                            std::cos(phi) - std::cos(phis));
  }

  // x-matching residual Re[xI(phi0)] - L at fixed (phi0, psi0)
  double F1(double phi0, double psi0) const {
    return xI(cplx(phi0, 0), cplx(phi0, psi0)).real() - L;
  }
  // bisection for psi0: F1 < 0 at psi -> 0, > 0 once the kappa0 term wins
  double psi_of_phi(double phi0) const {
    double lo = 1e-9, hi = 1e-9;
    double fhi = F1(phi0, hi);
    while (fhi < 0 && hi < 50) {
      hi *= 2;
      fhi = F1(phi0, hi);
    }
    REQUIRE(fhi >= 0);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (F1(phi0, mid) < 0) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  double p_of_phi(double phi0) const {
    const double psi0 = psi_of_phi(phi0);
    const cplx v = vI(cplx(phi0, 0), cplx(phi0, psi0));
    const double r = (v * v).real() + 2 * U0;
    if (r < 0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(r) + pF() * std::sin(phi0);
  }
  // all saddles in [0, 2pi) by dense scan + bisection on p(phi0) - p
  std::vector<std::pair<double, double>> scan(double p, int n = 4000) const {
    std::vector<std::pair<double, double>> out;
    double prev_phi = 0, prev_f = p_of_phi(0.0) - p;
    for (int i = 1; i <= n; ++i) {
      const double phi = two_pi * i / n;
      const double f = p_of_phi(phi) - p;
      if (std::isfinite(prev_f) && std::isfinite(f) && prev_f * f < 0) {
        double lo = prev_phi, hi = phi, flo = prev_f;
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = p_of_phi(mid) - p;
          if (flo * fm <= 0) hi = mid;
          else {
            lo = mid;
            flo = fm;
          }
        }
        const double phi0 = 0.5 * (lo + hi);
        out.emplace_back(phi0, psi_of_phi(phi0));
      }
      prev_phi = phi;
      prev_f = f;
    }
    return out;
  }

  // finite-slope matching oracle: regions I/II/III with a linear barrier edge
  // of width Delta; returns the complex drift momentum of the trajectory that
  // starts at phis = phi0 + i psi0
  cplx drift_matched(double phi0, double psi0, double Delta) const {
    const cplx phis{phi0, psi0};
    const double F0 = U0 / Delta;
    // complex matching time phi' where xI = L
    cplx phip{phi0, 0};
    for (int it = 0; it < 200; ++it) {
      const cplx f = xI(phip, phis) - L;
      const cplx step = f / (vI(phip, phis) / w);
      phip -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const cplx vin = vI(phip, phis);
    // region II: uniform downhill force F0 next to the oscillating field
    const cplx vq = std::sqrt(vin * vin + 2 * U0);
    cplx phipp = phip + w * (vq - vin) / F0;
    for (int it = 0; it < 300; ++it) {
      const cplx d = phipp - phip;
      const cplx x = L + (vin / w + pF() * std::sin(phip) / w) * d +
                     (pF() / w) * (std::cos(phipp) - std::cos(phip)) +
                     (F0 / (2 * w * w)) * d * d;
      const cplx v = vin - pF() * (std::sin(phipp) - std::sin(phip)) + (F0 / w) * d;
      const cplx step = (x - (L + Delta)) / (v / w);
      phipp -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const cplx d = phipp - phip;
    const cplx vout =
        vin - pF() * (std::sin(phipp) - std::sin(phip)) + (F0 / w) * d;
    return vout + pF() * std::sin(phipp);
  }
};

}  // namespace

TEST_CASE("exit velocity: field-free and quarter-phase reductions") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);

  FieldSpec off{0.0, 0.1, Envelope::Monochromatic, 6};
  CHECK(exit_velocity(s, off, 1.3, 0.2) == doctest::Approx(s.p0).epsilon(1e-14));

  FieldSpec f{0.05, 0.1, Envelope::Monochromatic, 6};
  const double psi0 = 0.17;
  const double pF = f.pF();
  const double expect = std::sqrt(
      s.p0 * s.p0 + pF * pF * std::pow(std::cosh(psi0) - 1.0, 2));
  CHECK(exit_velocity(s, f, pi / 2, psi0) == doctest::Approx(expect).epsilon(1e-14));

  CHECK_THROWS_AS(exit_velocity(s, FieldSpec{3.0, 0.1, Envelope::Monochromatic, 6},
                                0.0, 1.0),
                  std::domain_error);
}

TEST_CASE("exit velocity against the matched region I/II/III trajectory") {
  // the slope-width oracle discriminates the sign of the kappa0*pF cross term:
  // the implemented (minus) version stays within the reduced-system error,
  // the opposite sign misses by two orders of magnitude
  Mono m{3.0, 3.0, 1.217, 0.1, 0.02};
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{0.02, 0.1, Envelope::Monochromatic, 6};

  const auto saddles = solve_saddles_monochromatic(s, b, f, s.p0);
  REQUIRE(saddles.size() == 2);
  for (const auto& sd : saddles) {
    for (double Delta : {1e-3, 1e-4}) {
      const cplx drift = m.drift_matched(sd.phi0, sd.psi0, Delta);
      CHECK(std::abs(drift - s.p0) / s.p0 < 5e-4);

      // opposite cross-term sign: far outside the oracle band
      const double pFv = f.pF();
      const double flipped = std::sqrt(
          s.p0 * s.p0 + 2 * s.kappa0 * pFv * std::cos(sd.phi0) * std::sinh(sd.psi0) +
          pFv * pFv *
              (std::pow(std::cosh(sd.psi0) - 1, 2) * std::pow(std::sin(sd.phi0), 2) -
               std::pow(std::cos(sd.phi0) * std::sinh(sd.psi0), 2)));
      const double p_flipped = flipped + pFv * std::sin(sd.phi0);
      CHECK(std::abs(p_flipped - drift.real()) >
            50 * std::abs(sd.v0 + pFv * std::sin(sd.phi0) - drift.real()));
    }
    // the two formulations of v0 agree identically
    CHECK(exit_velocity(s, f, sd.phi0, sd.psi0) ==
          doctest::Approx(sd.v0).epsilon(1e-13));
  }
}

TEST_CASE("weak-field degeneracy: psi0 -> L w / kappa0 and p -> p0") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{1e-8, 0.1, Envelope::Monochromatic, 6};
  const double psi00 = b.width() * f.omega / s.kappa0;
  // degenerate family: the saddle count blurs as amplitude -> 0, but every
  // converged point collapses onto (psi00, p0)
  const auto saddles = solve_saddles_monochromatic(s, b, f, s.p0);
  REQUIRE(saddles.size() >= 2);
  for (const auto& sd : saddles) {
    CHECK(sd.psi0 == doctest::Approx(psi00).epsilon(1e-6));
    CHECK(sd.v0 == doctest::Approx(s.p0).epsilon(1e-7));
  }
}

TEST_CASE("saddle pair against the dense-scan oracle") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  for (double A : {0.02, 0.12}) {
    Mono m{3.0, 3.0, 1.217, 0.1, A};
    FieldSpec f{A, 0.1, Envelope::Monochromatic, 6};
    for (double frac : {-0.6, 0.0, 0.45}) {
      const double p = s.p0 + frac * f.pF();
      const auto got = solve_saddles_monochromatic(s, b, f, p);
      const auto want = m.scan(p);
      REQUIRE(got.size() == want.size());
      for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].phi0 == doctest::Approx(want[i].first).epsilon(1e-8));
        CHECK(got[i].psi0 == doctest::Approx(want[i].second).epsilon(1e-8));
        CHECK(got[i].residual < 1e-10);
        CHECK(got[i].psi0 > 0);
      }
    }
  }
}

TEST_CASE("no saddles outside the weak-field classical boundaries") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{0.02, 0.1, Envelope::Monochromatic, 6};
  CHECK(solve_saddles_monochromatic(s, b, f, s.p0 + 2 * f.pF()).empty());
  CHECK(solve_saddles_monochromatic(s, b, f, s.p0 - 2 * f.pF()).empty());
}

TEST_CASE("pulse saddles: count and positions against a per-half-cycle scan") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{0.05, 0.1, Envelope::SinSquared, 6};
  const double p = s.p0 + 0.3 * f.pF();  // generic momentum (p = p0 is the
                                         // degenerate edge-family point)
  const auto got = solve_saddles_pulse(s, b, f, p);
  CHECK(got.size() <= 2u * f.n_cycles);
  CHECK(got.size() >= 6);  // interior half-cycles all contribute

  // independent scan over exit times: the pulse pF from its three-sine form
  const double w = f.omega, A = f.amplitude;
  const double wp = w * (1 + 1.0 / 6), wm = w * (1 - 1.0 / 6);
  auto pF_pulse = [&](cplx t) {
    return -(A / (2 * w)) * std::sin(w * t) + (A / (4 * wp)) * std::sin(wp * t) +
           (A / (4 * wm)) * std::sin(wm * t);
  };
  auto F1 = [&](double t0, double psi0) {
    const cplx ts{t0, psi0 / w};
    // G(t0) - G(ts) for pF = sum a_k sin(nu_k t): sum (a_k/nu_k)(cos nu_k ts - cos nu_k t0)
    const cplx dG = (-A / (2 * w * w)) * (std::cos(w * ts) - std::cos(w * t0)) +
                    (A / (4 * wp * wp)) * (std::cos(wp * ts) - std::cos(wp * t0)) +
                    (A / (4 * wm * wm)) * (std::cos(wm * ts) - std::cos(wm * t0));
    const cplx x = I * s.kappa0 * (t0 - ts) + dG - pF_pulse(ts) * (t0 - ts);
    return x.real() - b.width();
  };
  auto psi_of = [&](double t0) {
    double lo = 1e-9, hi = 1e-9;
    while (F1(t0, hi) < 0 && hi < 50) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (F1(t0, mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto p_of = [&](double t0) {
    const double psi0 = psi_of(t0);
    const cplx ts{t0, psi0 / w};
    const cplx v = I * s.kappa0 + pF_pulse(t0) - pF_pulse(ts);
    const double r = (v * v).real() + 2 * b.U0;
    if (r < 0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(r) - pF_pulse(cplx(t0, 0)).real();
  };
  std::vector<double> scan_t0;
  const int n = 6000;
  double prev_t = 1e-6, prev_f = p_of(prev_t) - p;
  for (int i = 1; i <= n; ++i) {
    const double t = f.duration() * i / double(n + 1);
    const double fv = p_of(t) - p;
    if (std::isfinite(prev_f) && std::isfinite(fv) && prev_f * fv < 0) {
      double lo = prev_t, hi = t, flo = prev_f;
      for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p_of(mid) - p;
        if (flo * fm <= 0) hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      scan_t0.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_f = fv;
  }
  REQUIRE(got.size() == scan_t0.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].phi0 / w == doctest::Approx(scan_t0[i]).epsilon(1e-7));
    CHECK(got[i].residual < 1e-10);
  }
}

TEST_CASE("vanishing pulse amplitude: psi0 collapses to the field-free value") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{1e-10, 0.1, Envelope::SinSquared, 6};
  const double psi00 = b.width() * f.omega / s.kappa0;
  const auto saddles = solve_saddles_pulse(s, b, f, s.p0);
  CHECK(!saddles.empty());
  for (const auto& sd : saddles) {
    CHECK(sd.psi0 == doctest::Approx(psi00).epsilon(1e-6));
    CHECK(sd.v0 == doctest::Approx(s.p0).epsilon(1e-8));
  }
}

TEST_CASE("slope dp/dt0: boundary zero and weak-field magnitude") {
  BarrierSpec b{3.0, 0.0, 3.0, 0.0};
  const QSState s = derive_state(b, 1.217);
  FieldSpec f{0.001, 0.1, Envelope::Monochromatic, 6};

  // at the true fold of p(phi0) the branches merge and the slope vanishes;
  // the fold sits near (not at) phi0 = pi/2 because the exit velocity also
  // varies along the branch
  {
    Mono mw{3.0, 3.0, 1.217, 0.1, 0.001};
    double pmax = 0;
    for (int k = 0; k <= 700; ++k) {
      const double phi = 0.8 + (2.4 - 0.8) * k / 700.0;
      pmax = std::max(pmax, mw.p_of_phi(phi));
    }
    const auto edge = solve_saddles_monochromatic(s, b, f, pmax - 1e-9 * s.p0);
    REQUIRE(!edge.empty());
    for (const auto& sd : edge)
      CHECK(std::abs(slope_dp_dt0(s, b, f, sd)) < 0.05 * f.amplitude);
  }

  // near phi0 = 0 the weak-field slope is E0*cos(phi0) ~ amplitude
  const auto mid = solve_saddles_monochromatic(s, b, f, s.p0);
  REQUIRE(mid.size() == 2);
  for (const auto& sd : mid)
    CHECK(std::abs(slope_dp_dt0(s, b, f, sd)) ==
          doctest::Approx(f.amplitude * std::abs(std::cos(sd.phi0))).epsilon(2e-3));

  // five-point finite-difference oracle at strong field
  FieldSpec fs{0.12, 0.1, Envelope::Monochromatic, 6};
  Mono m{3.0, 3.0, 1.217, 0.1, 0.12};
  const auto strong = solve_saddles_monochromatic(s, b, fs, s.p0);
  REQUIRE(strong.size() == 2);
  for (const auto& sd : strong) {
    const double h = 1e-3;
    auto pv = [&](double phi) { return m.p_of_phi(phi); };
    const double five = (-pv(sd.phi0 + 2 * h) + 8 * pv(sd.phi0 + h) -
                         8 * pv(sd.phi0 - h) + pv(sd.phi0 - 2 * h)) /
                        (12 * h) * fs.omega;
    CHECK(slope_dp_dt0(s, b, fs, sd) == doctest::Approx(five).epsilon(1e-6));
  }
}
