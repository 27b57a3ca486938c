#include "qsdecay/field.hpp"

#include <cmath>
#include <stdexcept>

namespace qsdecay {

FieldShape::FieldShape(const FieldSpec& spec) : spec_(spec) {
  spec.validate();
  const double A = spec.amplitude, w = spec.omega;
  if (spec.envelope == Envelope::Monochromatic) {
    Tp_ = std::numeric_limits<double>::infinity();
    windowed_ = false;
    // E = A cos(wt), pF = -(A/w) sin(wt)
    pf_.push_back({-A / w, w});
  } else {
    Tp_ = spec.duration();
    windowed_ = true;
    // E = (A/2)cos(wt) - (A/4)cos(w+ t) - (A/4)cos(w- t), w+- = w(1 +- 1/np)
    const double wp = w * (1.0 + 1.0 / spec.n_cycles);
    const double wm = w * (1.0 - 1.0 / spec.n_cycles);
    pf_.push_back({-A / (2 * w), w});
    pf_.push_back({A / (4 * wp), wp});
    if (spec.n_cycles == 1) {
      // the w- term degenerates to a DC component: E gains -A/4, pF gains
      // (A/4) t
      clin_ = A / 4.0;
    } else {
      pf_.push_back({A / (4 * wm), wm});
    }
  }
}

cplx FieldShape::pF_inside(cplx t) const {
  cplx v = clin_ * t;
  for (const auto& s : pf_) v += s.amp * std::sin(s.nu * t);
  return v;
}

cplx FieldShape::G_inside(cplx t) const {
  cplx v = 0.5 * clin_ * t * t;
  for (const auto& s : pf_) v += s.amp * (1.0 - std::cos(s.nu * t)) / s.nu;
  return v;
}

double FieldShape::Phi_inside(double t) const {
  // int_0^t pF^2, pF = sum a_k sin(nu_k t) + c t
  double v = clin_ * clin_ * t * t * t / 3.0;
  const size_t m = pf_.size();
  for (size_t k = 0; k < m; ++k) {
    const double a = pf_[k].amp, nu = pf_[k].nu;
    v += a * a * (0.5 * t - std::sin(2 * nu * t) / (4 * nu));
    if (clin_ != 0) {
      // 2 c a int t sin(nu t) = 2 c a [sin(nu t) - nu t cos(nu t)]/nu^2
      v += 2 * clin_ * a * (std::sin(nu * t) - nu * t * std::cos(nu * t)) /
           (nu * nu);
    }
    for (size_t l = k + 1; l < m; ++l) {
      const double b = pf_[l].amp, mu = pf_[l].nu;
      v += 2 * a * b *
           (std::sin((nu - mu) * t) / (2 * (nu - mu)) -
            std::sin((nu + mu) * t) / (2 * (nu + mu)));
    }
  }
  return v;
}

cplx FieldShape::E(cplx t) const {
  if (windowed_) {
    const double tr = t.real();
    if (tr < 0 || tr > Tp_) return 0;
  }
  // E = -d pF/dt
  cplx v = -clin_;
  for (const auto& s : pf_) v -= s.amp * s.nu * std::cos(s.nu * t);
  return v;
}

cplx FieldShape::pF(cplx t) const {
  if (windowed_) {
    const double tr = t.real();
    if (tr < 0) return 0;
    if (tr > Tp_) return pF_inside(Tp_);
  }
  return pF_inside(t);
}

cplx FieldShape::G(cplx t) const {
  if (windowed_) {
    const double tr = t.real();
    if (tr < 0) return 0;
    if (tr > Tp_) return G_inside(Tp_) + pF_inside(Tp_) * (t - Tp_);
  }
  return G_inside(t);
}

double FieldShape::Phi(double t) const {
  if (windowed_) {
    if (t < 0) return 0;
    if (t > Tp_) {
      const double ptail = pF_inside(Tp_).real();
      return Phi_inside(Tp_) + ptail * ptail * (t - Tp_);
    }
  }
  return Phi_inside(t);
}

FieldSample eval_field(const FieldSpec& field, ComplexTime t) {
  const FieldShape shape(field);
  const cplx tt = cplx(t.phi, t.psi) / field.omega;
  return FieldSample{shape.E(tt), shape.pF(tt), shape.G(tt)};
}

double pulse_net_momentum(const FieldSpec& field) {
  if (field.envelope != Envelope::SinSquared)
    throw std::invalid_argument("pulse_net_momentum: SinSquared envelope required");
  const FieldShape shape(field);
  // int E dt = -pF(Tp)
  return -shape.pF(field.duration()).real();
}

}  // namespace qsdecay
