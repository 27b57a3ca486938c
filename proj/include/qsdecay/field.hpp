#ifndef QSDECAY_FIELD_HPP
#define QSDECAY_FIELD_HPP

#include <complex>
#include <vector>

#include "qsdecay/params.hpp"

namespace qsdecay {

using cplx = std::complex<double>;

// Dimensionless complex time omega*t = phi + i*psi; psi > 0 is subbarrier
// (imaginary-time) motion.
struct ComplexTime {
  double phi = 0;
  double psi = 0;
};

struct FieldSample {
  cplx E;     // field value at t
  cplx pF_t;  // field momentum p_F(t) = -int_0^t E dt'
  cplx G_t;   // displacement integral G(t) = int_0^t p_F dt'
};

// Closed forms of E(t), p_F(t), G(t) and Phi(t) = int_0^t p_F^2 dt' for both
// field models, valid at complex time (analytic continuation of the branch
// containing Re t). For SinSquared: E = A sin^2(w t / 2 np) cos(w t) inside
// [0, Tp]; before the pulse all integrals vanish, after it E = 0 and p_F is
// frozen at p_F(Tp) (identically 0 for np >= 2).
class FieldShape {
 public:
  explicit FieldShape(const FieldSpec& spec);

  cplx E(cplx t) const;
  cplx pF(cplx t) const;
  cplx G(cplx t) const;
  double Phi(double t) const;  // real time only

  double duration() const { return Tp_; }
  const FieldSpec& spec() const { return spec_; }

 private:
  struct SineTerm {
    double amp, nu;
  };
  FieldSpec spec_;
  double Tp_ = 0;               // pulse length (inf for monochromatic)
  bool windowed_ = false;       // SinSquared
  std::vector<SineTerm> pf_;    // p_F(t) = sum amp*sin(nu t) + clin*t
  double clin_ = 0;             // nonzero only for n_cycles == 1
  cplx pF_inside(cplx t) const;
  cplx G_inside(cplx t) const;
  double Phi_inside(double t) const;
};

FieldSample eval_field(const FieldSpec& field, ComplexTime t);

// int E dt over the full pulse (SinSquared only); 0 to machine precision for
// n_cycles >= 2.
double pulse_net_momentum(const FieldSpec& field);

}  // namespace qsdecay

#endif
