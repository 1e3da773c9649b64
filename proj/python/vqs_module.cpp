// python bindings for the core library and the experiment runner
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vqs/config.hpp"
#include "vqs/decoherence.hpp"
#include "vqs/eom.hpp"
#include "vqs/experiments.hpp"
#include "vqs/kernels.hpp"
#include "vqs/propagator.hpp"

namespace py = pybind11;
using namespace vqs;

PYBIND11_MODULE(_vqs, m) {
  m.doc() = "vacuum-coupled quantum systems";
  m.attr("__version__") = VQS_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_ArithmeticError);

  py::enum_<UnitSystem>(m, "UnitSystem").value("SI", UnitSystem::SI).value("Natural", UnitSystem::Natural);

  py::class_<PhysicalContext>(m, "PhysicalContext")
      .def_static("natural", &PhysicalContext::natural, py::arg("alpha") = codata::alpha,
                  py::arg("mass") = 1.0)
      .def_static("si_electron", &PhysicalContext::si_electron)
      .def_readwrite("hbar", &PhysicalContext::hbar)
      .def_readwrite("c", &PhysicalContext::c)
      .def_readwrite("eps0", &PhysicalContext::eps0)
      .def_readwrite("e_charge", &PhysicalContext::e_charge)
      .def_readwrite("mass_bare", &PhysicalContext::mass_bare)
      .def_readonly("unit_system", &PhysicalContext::unit_system)
      .def("validate", &PhysicalContext::validate);

  py::class_<CutoffConfig>(m, "CutoffConfig")
      .def_static("from_omega_max", &CutoffConfig::from_omega_max)
      .def_readonly("omega_max", &CutoffConfig::omega_max)
      .def_readonly("epsilon", &CutoffConfig::epsilon)
      .def_readonly("k_max", &CutoffConfig::k_max);

  m.def("fine_structure", &fine_structure);
  m.def("mass_shift", &mass_shift);
  m.def("renormalized_mass", py::overload_cast<const PhysicalContext&, const CutoffConfig&>(&renormalized_mass));
  m.def("runaway_time", &runaway_time);

  py::class_<KernelFamily>(m, "KernelFamily")
      .def(py::init<const PhysicalContext&, const CutoffConfig&>())
      .def_property_readonly("epsilon", &KernelFamily::epsilon)
      .def("noise", &KernelFamily::noise)
      .def("dissipation", &KernelFamily::dissipation)
      .def("dissipation_via_delta", &KernelFamily::dissipation_via_delta)
      .def("smoothed_delta", &KernelFamily::smoothed_delta)
      .def("n1", &KernelFamily::n1)
      .def("n2", &KernelFamily::n2)
      .def("n2_plateau", &KernelFamily::n2_plateau)
      .def("mass_shift", &KernelFamily::mass_shift)
      .def("vem_coefficient", &KernelFamily::vem_coefficient)
      .def("dissipation_weighted_integral",
           [](const KernelFamily& k, double f0, double f2, double f3) {
             return k.dissipation_weighted_integral({f0, f2, f3});
           },
           py::arg("f0"), py::arg("f2"), py::arg("f3"))
      .def("dissipation_weighted_integral_bruteforce",
           &KernelFamily::dissipation_weighted_integral_bruteforce);

  m.def("coherence_length", &coherence_length);
  m.def("decoherence_factor", &decoherence_factor);
  m.def("vem_cancellation_residual", &vem_cancellation_residual);
  m.def("vem_cancellation_residual_bruteforce", &vem_cancellation_residual_bruteforce);

  py::class_<SwitchingProfile>(m, "SwitchingProfile")
      .def_static("constant", &SwitchingProfile::constant, py::arg("T"), py::arg("level") = 1.0)
      .def_static("linear_ramp", &SwitchingProfile::linear_ramp)
      .def_static("raised_cosine", &SwitchingProfile::raised_cosine)
      .def("value", &SwitchingProfile::value)
      .def("integral", &SwitchingProfile::integral)
      .def_property_readonly("total", &SwitchingProfile::total);
  m.def("switched_n2", &switched_n2);
  m.def("false_dec_limit", &false_dec_limit);
  m.def("collisional_exponent", &collisional_exponent);

  m.def(
      "classical_runaway",
      [](const PhysicalContext& ctx, const CutoffConfig& cut, double a0, double t_end, double dt) {
        auto zero = [](double, double) { return 0.0; };
        const auto r = integrate_classical_al(zero, {0.0, 0.0, a0}, t_end, dt, ctx, cut);
        py::dict d;
        d["t"] = r.t;
        d["x"] = r.x;
        d["v"] = r.v;
        d["a"] = r.a;
        d["growth_rate"] = r.growth_rate ? py::cast(*r.growth_rate) : py::none();
        return d;
      },
      py::arg("ctx"), py::arg("cut"), py::arg("a0"), py::arg("t_end"), py::arg("dt"));

  m.def(
      "harmonic_quantum_eom",
      [](const PhysicalContext& ctx, const CutoffConfig& cut, double omega0, double x0, double p0,
         double t_end, double dt) {
        const auto spec = SystemSpec::harmonic(omega0, ctx.mass_bare, OscillatorBasis{16, omega0});
        const auto r = integrate_quantum_eom(spec, x0, p0, t_end, dt, ctx, cut);
        py::dict d;
        d["t"] = r.t;
        d["x_mean"] = r.x;
        d["p_mean"] = r.p;
        return d;
      });

  m.def(
      "evolve_harmonic",
      [](const PhysicalContext& ctx, const CutoffConfig& cut, double omega0, int dim, double x0,
         double dt, std::size_t n_steps, bool markov) {
        const KernelFamily k(ctx, cut);
        const auto spec = SystemSpec::harmonic(omega0, ctx.mass_bare, OscillatorBasis{dim, omega0});
        PropagationOptions o;
        o.dt = dt;
        o.n_steps = n_steps;
        o.markov = markov;
        const auto tr = propagate(coherent_state(spec, x0, 0.0, ctx.hbar), spec, k, o);
        py::dict d;
        d["t"] = tr.t;
        d["x_mean"] = tr.x_mean;
        d["p_mean"] = tr.p_mean;
        d["purity"] = tr.purity;
        d["trace_err"] = tr.trace_err;
        d["herm_err"] = tr.herm_err;
        d["min_eig"] = tr.min_eig;
        return d;
      },
      py::arg("ctx"), py::arg("cut"), py::arg("omega0"), py::arg("dim"), py::arg("x0"),
      py::arg("dt"), py::arg("n_steps"), py::arg("markov") = false);

  m.def("experiments", [] {
    std::vector<std::string> out;
    for (Experiment e : all_experiments()) out.push_back(experiment_name(e));
    return out;
  });
  m.def("preset_text", [](const std::string& name) { return to_text(preset(parse_experiment(name))); });
  m.def("canonical_config", [](const std::string& text) { return to_text(parse_config(text)); });
  m.def(
      "run",
      [](const std::string& config_text, const std::filesystem::path& root) {
        const auto cfg = parse_config(config_text);
        ExperimentResult r;
        {
          py::gil_scoped_release nogil;
          r = run_experiment(cfg, root);
        }
        py::list checks;
        for (const auto& c : r.checks) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["limit"] = c.limit;
          d["pass"] = c.pass;
          checks.append(d);
        }
        py::dict d;
        d["name"] = r.name;
        d["dir"] = r.dir;
        d["exit_code"] = r.exit_code;
        d["files"] = r.files;
        d["checks"] = checks;
        d["message"] = r.message;
        return d;
      },
      py::arg("config_text"), py::arg("root"));
}
