#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsdecay/config.hpp"
#include "qsdecay/field.hpp"
#include "qsdecay/itm.hpp"
#include "qsdecay/params.hpp"
#include "qsdecay/tdse.hpp"

namespace py = pybind11;
using namespace qsdecay;

namespace {

// small dict-friendly views of the heavier result types
py::dict spectrum_to_dict(const Spectrum& s) {
  py::dict d;
  d["kind"] = s.kind == SpectrumKind::Peaks ? "peaks" : "continuous";
  py::list entries;
  for (const auto& e : s.entries) {
    py::dict ed;
    ed["p"] = e.p;
    ed["E"] = 0.5 * e.p * e.p;
    ed["weight"] = e.weight;
    ed["j"] = e.j;
    py::list sads;
    for (const auto& sd : e.saddles) {
      py::dict sdd;
      sdd["alpha"] = sd.alpha;
      sdd["phi0"] = sd.phi0;
      sdd["psi0"] = sd.psi0;
      sdd["v0"] = sd.v0;
      sdd["W"] = sd.W;
      sdd["dp_dt0"] = sd.dp_dt0;
      sdd["residual"] = sd.residual;
      sads.append(sdd);
    }
    ed["saddles"] = sads;
    entries.append(ed);
  }
  d["entries"] = entries;
  d["warnings"] = s.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qsdecay, m) {
  m.doc() = "Laser-assisted decay of quasistationary states: imaginary-time "
            "method spectra and a 1D grid TDSE reference solver (atomic units)";

  py::class_<BarrierSpec>(m, "BarrierSpec")
      .def(py::init([](double U0, double a, double b, double delta) {
             BarrierSpec s{U0, a, b, delta};
             s.validate();
             return s;
           }),
           py::arg("U0"), py::arg("a"), py::arg("b"), py::arg("delta") = 0.0)
      .def_readwrite("U0", &BarrierSpec::U0)
      .def_readwrite("a", &BarrierSpec::a)
      .def_readwrite("b", &BarrierSpec::b)
      .def_readwrite("delta", &BarrierSpec::delta)
      .def("width", &BarrierSpec::width);

  py::class_<QSState>(m, "QSState")
      .def_readonly("E0", &QSState::E0)
      .def_readonly("p0", &QSState::p0)
      .def_readonly("kappa0", &QSState::kappa0);

  py::enum_<Envelope>(m, "Envelope")
      .value("Monochromatic", Envelope::Monochromatic)
      .value("SinSquared", Envelope::SinSquared);

  py::class_<FieldSpec>(m, "FieldSpec")
      .def(py::init([](double amplitude, double omega, Envelope envelope,
                       int n_cycles) {
             FieldSpec f{amplitude, omega, envelope, n_cycles};
             f.validate();
             return f;
           }),
           py::arg("amplitude"), py::arg("omega"),
           py::arg("envelope") = Envelope::Monochromatic,
           py::arg("n_cycles") = 6)
      .def_readwrite("amplitude", &FieldSpec::amplitude)
      .def_readwrite("omega", &FieldSpec::omega)
      .def_readwrite("envelope", &FieldSpec::envelope)
      .def_readwrite("n_cycles", &FieldSpec::n_cycles)
      .def("pF", &FieldSpec::pF)
      .def("duration", &FieldSpec::duration);

  py::class_<DimlessParams>(m, "DimlessParams")
      .def_readonly("K0", &DimlessParams::K0)
      .def_readonly("Fred", &DimlessParams::Fred)
      .def_readonly("zF", &DimlessParams::zF)
      .def_readonly("gammaK", &DimlessParams::gammaK)
      .def_readonly("mu", &DimlessParams::mu)
      .def_readonly("Lpeaks", &DimlessParams::Lpeaks)
      .def_readonly("pF", &DimlessParams::pF)
      .def_readonly("Up", &DimlessParams::Up);

  py::class_<SaddlePoint>(m, "SaddlePoint")
      .def_readonly("alpha", &SaddlePoint::alpha)
      .def_readonly("phi0", &SaddlePoint::phi0)
      .def_readonly("psi0", &SaddlePoint::psi0)
      .def_readonly("v0", &SaddlePoint::v0)
      .def_readonly("W", &SaddlePoint::W)
      .def_readonly("dp_dt0", &SaddlePoint::dp_dt0)
      .def_readonly("residual", &SaddlePoint::residual);

  py::class_<ItmSettings>(m, "ItmSettings")
      .def(py::init<>())
      .def_readwrite("newton_tol", &ItmSettings::newton_tol)
      .def_readwrite("slope_step", &ItmSettings::slope_step)
      .def_readwrite("quad_tol", &ItmSettings::quad_tol)
      .def_readwrite("threads", &ItmSettings::threads);

  py::class_<RateSummary>(m, "RateSummary")
      .def_readonly("R", &RateSummary::R)
      .def_readonly("R0", &RateSummary::R0)
      .def_readonly("ratio", &RateSummary::ratio);

  m.def("derive_state", &derive_state, py::arg("barrier"), py::arg("E0"));
  m.def("dimensionless", &dimensionless, py::arg("state"), py::arg("field"),
        py::arg("barrier"));
  m.def(
      "validity_report",
      [](const BarrierSpec& b, const QSState& s, const FieldSpec& f) {
        py::list out;
        for (const auto& g : validity_report(b, s, f))
          out.append(py::make_tuple(g.name, g.pass, g.margin, g.detail));
        return out;
      },
      py::arg("barrier"), py::arg("state"), py::arg("field"));

  m.def("field_free_action", &field_free_action, py::arg("state"), py::arg("barrier"));
  m.def("field_free_rate", &field_free_rate, py::arg("state"), py::arg("barrier"));
  m.def("exit_velocity", &exit_velocity, py::arg("state"), py::arg("field"),
        py::arg("phi0"), py::arg("psi0"));
  m.def("solve_saddles_monochromatic", &solve_saddles_monochromatic,
        py::arg("state"), py::arg("barrier"), py::arg("field"), py::arg("p"),
        py::arg("settings") = ItmSettings{});
  m.def(
      "solve_saddles_pulse",
      [](const QSState& s, const BarrierSpec& b, const FieldSpec& f, double p,
         const ItmSettings& st) { return solve_saddles_pulse(s, b, f, p, st); },
      py::arg("state"), py::arg("barrier"), py::arg("field"), py::arg("p"),
      py::arg("settings") = ItmSettings{});
  m.def("action_full", &action_full, py::arg("state"), py::arg("barrier"),
        py::arg("field"), py::arg("saddle"), py::arg("p"),
        py::arg("settings") = ItmSettings{});
  m.def("action_weakfield", &action_weakfield, py::arg("state"),
        py::arg("barrier"), py::arg("field"), py::arg("phi0"), py::arg("p"));
  m.def(
      "peak_momenta",
      [](const QSState& s, const FieldSpec& f, double pmin, double pmax) {
        py::list out;
        for (const auto& pk : peak_momenta(s, f, pmin, pmax))
          out.append(py::make_tuple(pk.j, pk.p));
        return out;
      },
      py::arg("state"), py::arg("field"), py::arg("pmin"), py::arg("pmax"));
  m.def(
      "spectrum_monochromatic",
      [](const QSState& s, const BarrierSpec& b, const FieldSpec& f,
         const ItmSettings& st) {
        return spectrum_to_dict(spectrum_monochromatic(s, b, f, st));
      },
      py::arg("state"), py::arg("barrier"), py::arg("field"),
      py::arg("settings") = ItmSettings{});
  m.def(
      "spectrum_pulse",
      [](const QSState& s, const BarrierSpec& b, const FieldSpec& f,
         const std::vector<double>& p_grid, const ItmSettings& st) {
        return spectrum_to_dict(spectrum_pulse(s, b, f, p_grid, st));
      },
      py::arg("state"), py::arg("barrier"), py::arg("field"), py::arg("p_grid"),
      py::arg("settings") = ItmSettings{});
  m.def(
      "total_rate_monochromatic",
      [](const QSState& s, const BarrierSpec& b, const FieldSpec& f,
         const ItmSettings& st) {
        const Spectrum spec = spectrum_monochromatic(s, b, f, st);
        return total_rate(spec, field_free_rate(s, b));
      },
      py::arg("state"), py::arg("barrier"), py::arg("field"),
      py::arg("settings") = ItmSettings{},
      "spectrum + total rate + ratio against the field-free rate");

  m.def(
      "tdse_ground_state",
      [](const BarrierSpec& b, double x_max, double dx) {
        const Grid g = Grid::make(x_max, dx);
        const auto U = build_potential(g, b, true);
        return ground_state(g, U).second;
      },
      py::arg("barrier"), py::arg("x_max") = 300.0, py::arg("dx") = 0.1,
      "ground-state energy behind the infinite barrier (grid-discretized)");

  m.def("pulse_net_momentum", &pulse_net_momentum, py::arg("field"));
}
