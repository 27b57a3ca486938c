#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsdecay/field.hpp"

using namespace qsdecay;

namespace {

constexpr double pi = std::numbers::pi;

// Simpson quadrature of a real-time integrand, independent of the closed forms
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

double pulse_E(const FieldSpec& f, double t) {
  if (t < 0 || t > f.duration()) return 0;
  const double s = std::sin(f.omega * t / (2 * f.n_cycles));
  return f.amplitude * s * s * std::cos(f.omega * t);
}

}  // namespace

TEST_CASE("monochromatic field at the reference phases") {
  FieldSpec f{0.12, 0.1, Envelope::Monochromatic, 6};
  const FieldSample at0 = eval_field(f, {0.0, 0.0});
  CHECK(at0.E.real() == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(std::abs(at0.pF_t) < 1e-15);
  CHECK(std::abs(at0.G_t) < 1e-15);

  const FieldSample quarter = eval_field(f, {pi / 2, 0.0});
  CHECK(std::abs(quarter.E) < 1e-15);
  CHECK(quarter.pF_t.real() == doctest::Approx(-1.2).epsilon(1e-14));
}

TEST_CASE("sin^2 pulse at the center and against quadrature") {
  FieldSpec f{0.02, 0.057, Envelope::SinSquared, 6};
  // center of the pulse: envelope 1, cos(6 pi) = +1
  const FieldSample c = eval_field(f, {6 * pi, 0.0});
  CHECK(c.E.real() == doctest::Approx(0.02).epsilon(1e-12));

  // closed-form pF and G against direct quadrature of E
  const FieldShape shape(f);
  for (double t : {13.0, 101.5, 333.0, 0.7 * f.duration()}) {
    const double pF_quad = -simpson([&](double u) { return pulse_E(f, u); }, 0, t, 20000);
    CHECK(shape.pF(t).real() == doctest::Approx(pF_quad).epsilon(1e-10));
    const double G_quad =
        simpson([&](double u) { return shape.pF(u).real(); }, 0, t, 20000);
    CHECK(shape.G(t).real() == doctest::Approx(G_quad).epsilon(1e-10));
    const double Phi_quad = simpson(
        [&](double u) { const double v = shape.pF(u).real(); return v * v; }, 0,
        t, 20000);
    CHECK(shape.Phi(t) == doctest::Approx(Phi_quad).epsilon(1e-10));
  }
}

TEST_CASE("d pF/dt = -E and dG/dt = pF at complex time (finite differences)") {
  const double hphi = 1e-6;  // step in omega*t
  for (const FieldSpec f : {FieldSpec{0.12, 0.1, Envelope::Monochromatic, 6},
                            FieldSpec{0.05, 0.057, Envelope::SinSquared, 6}}) {
    const FieldShape shape(f);
    const double h = hphi / f.omega;
    for (ComplexTime ct : {ComplexTime{0.3, 0.0}, ComplexTime{2.0, 0.15},
                           ComplexTime{9.4, 0.4}}) {
      const cplx t = cplx(ct.phi, ct.psi) / f.omega;
      const cplx dpF = (shape.pF(t + h) - shape.pF(t - h)) / (2 * h);
      CHECK(std::abs(dpF + shape.E(t)) <=
            1e-8 * std::max(1.0, std::abs(shape.E(t))));
      const cplx dG = (shape.G(t + h) - shape.G(t - h)) / (2 * h);
      CHECK(std::abs(dG - shape.pF(t)) <=
            1e-8 * std::max(1.0, std::abs(shape.pF(t))));
    }
  }
}

TEST_CASE("monochromatic pF is periodic and Up matches its cycle average") {
  FieldSpec f{0.08, 0.13, Envelope::Monochromatic, 6};
  const FieldShape shape(f);
  const double T = 2 * pi / f.omega;
  for (double t : {0.4, 7.0, 19.3}) {
    CHECK(shape.pF(t + T).real() ==
          doctest::Approx(shape.pF(t).real()).epsilon(1e-12));
  }
  const double Up_avg = simpson(
      [&](double t) {
        const double v = shape.pF(t).real();
        return 0.5 * v * v;
      },
      0, T, 40000) / T;
  const double pF = f.pF();
  CHECK(Up_avg == doctest::Approx(pF * pF / 4).epsilon(1e-10));
}

TEST_CASE("pulse transfers zero net momentum for n_cycles >= 2") {
  for (int np : {2, 3, 6, 12}) {
    FieldSpec f{0.37, 0.09, Envelope::SinSquared, np};
    CHECK(std::abs(pulse_net_momentum(f)) < 1e-12);
  }
  // n_cycles = 1 is the degenerate case: the envelope's DC component leaves
  // int E dt = -A*pi/(2w); verified against quadrature
  FieldSpec f1{0.1, 0.1, Envelope::SinSquared, 1};
  const double expected = -0.1 * pi / (2 * 0.1);
  CHECK(pulse_net_momentum(f1) == doctest::Approx(expected).epsilon(1e-12));
  const double quad = simpson([&](double u) { return pulse_E(f1, u); }, 0,
                              f1.duration(), 40000);
  CHECK(pulse_net_momentum(f1) == doctest::Approx(quad).epsilon(1e-9));

  // partial-pulse integral: the half-pulse value vanishes identically (all
  // three harmonics hit integer multiples of pi), so probe a quarter pulse
  FieldSpec f6{0.05, 0.1, Envelope::SinSquared, 6};
  const FieldShape shape(f6);
  CHECK(std::abs(shape.pF(f6.duration() / 2).real()) < 1e-14);
  const double quarter = simpson([&](double u) { return pulse_E(f6, u); }, 0,
                                 f6.duration() / 4, 40000);
  CHECK(-shape.pF(f6.duration() / 4).real() ==
        doctest::Approx(quarter).epsilon(1e-10));
  CHECK(std::abs(quarter) > 1e-4);
}
