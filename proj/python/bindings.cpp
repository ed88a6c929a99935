#include <cstring>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "donorspin/decoherence.hpp"
#include "donorspin/meissner.hpp"
#include "donorspin/pipeline.hpp"
#include "donorspin/spin_hamiltonian.hpp"

namespace py = pybind11;
using namespace donorspin;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Donor-spin spectroscopy and coherence forward model";
  m.attr("__version__") = kVersion;

  py::class_<SpinSystem>(m, "SpinSystem")
      .def(py::init<>())
      .def_readwrite("electron_spin", &SpinSystem::electron_spin)
      .def_readwrite("nuclear_spin", &SpinSystem::nuclear_spin)
      .def_readwrite("hyperfine", &SpinSystem::hyperfine)
      .def_readwrite("gamma_e", &SpinSystem::gamma_e)
      .def_readwrite("gamma_n", &SpinSystem::gamma_n)
      .def_readwrite("strain_k", &SpinSystem::strain_k)
      .def_readwrite("strain_l", &SpinSystem::strain_l)
      .def_readwrite("stark_eta", &SpinSystem::stark_eta)
      .def_property_readonly("dim", &SpinSystem::dim)
      .def_static("bismuth", &SpinSystem::bismuth);

  py::class_<Transition>(m, "Transition")
      .def_readonly("line", &Transition::line)
      .def_readonly("branch", &Transition::branch)
      .def_readonly("lower_m", &Transition::lower_m)
      .def_readonly("upper_m", &Transition::upper_m)
      .def_readonly("omega", &Transition::omega)
      .def_readonly("sx_element", &Transition::sx_element);

  m.def("eigenvalues", [](const SpinSystem& sys, double b0) {
    const auto lv = levels_at(sys, b0);
    std::vector<double> ev(lv.eigenvalues.data(), lv.eigenvalues.data() + lv.eigenvalues.size());
    return to_array(ev);
  }, py::arg("system"), py::arg("b0"), "Sorted eigenfrequencies (rad/s) at field b0 (T)");

  m.def("level_labels", [](const SpinSystem& sys, double b0) {
    const auto lv = levels_at(sys, b0);
    std::vector<std::pair<int, int>> out;
    for (const auto& l : lv.labels) out.emplace_back(l.f, l.m);
    return out;
  }, py::arg("system"), py::arg("b0"), "(F, m) label per level");

  m.def("transitions", [](const SpinSystem& sys, double b0) {
    return list_transitions(sys, levels_at(sys, b0));
  }, py::arg("system"), py::arg("b0"));

  m.def("low_field_frequency", &low_field_frequency, py::arg("system"), py::arg("m"),
        py::arg("b0"));

  m.def("effective_gamma", &effective_gamma, py::arg("system"), py::arg("line"),
        py::arg("branch"), py::arg("b0"));

  m.def("find_clock_transition", [](const SpinSystem& sys, int line) -> py::object {
    const auto ct = find_clock_transition(sys, line);
    if (!ct) return py::none();
    return py::make_tuple(ct->field, ct->branch);
  }, py::arg("system"), py::arg("line"), "(field_T, branch) or None");

  m.def("shift_from_strain", [](double exx, double eyy, double ezz, double exy,
                                const SpinSystem& sys) {
    return shift_from_strain(StrainTensor{exx, eyy, ezz, exy}, sys);
  }, py::arg("exx"), py::arg("eyy"), py::arg("ezz"), py::arg("exy"), py::arg("system"));

  m.def("shift_from_field", &shift_from_field, py::arg("e_field"), py::arg("system"));

  m.def("id_rate", &id_rate, py::arg("rho"), py::arg("gamma_eff"), py::arg("theta"),
        py::arg("gamma_res"));
  m.def("effective_noise", [](double t2, double gamma_eff) -> py::object {
    const auto db = effective_noise(t2, gamma_eff);
    if (!db) return py::none();
    return py::float_(*db);
  }, py::arg("t2"), py::arg("gamma_eff"));
  m.def("flip_flop_limit", &flip_flop_limit, py::arg("rho_per_um3"));
  m.def("charge_noise_t2", &charge_noise_t2, py::arg("e_r"), py::arg("sqrt_s_e"),
        py::arg("system"));
  m.def("dd_scaling", &dd_scaling, py::arg("t2_single"), py::arg("n_pulses"), py::arg("alpha"));
  m.def("thermal_scaling", [](double n_th) {
    const auto f = thermal_scaling(n_th);
    return py::make_tuple(f.echo, f.t1);
  }, py::arg("n_th"));

  m.def("surface_noise_vs_depth",
        [](double sigma1_per_m2, double wire_width, const std::vector<double>& x,
           const std::vector<double>& y) {
          SurfaceBath bath;
          bath.sigma1 = sigma1_per_m2;
          bath.sigma2 = sigma1_per_m2;
          bath.wire_width = wire_width;
          RectGrid grid{x, y};
          return to_array(expected_noise_map(bath, grid).db);
        },
        py::arg("sigma_per_m2"), py::arg("wire_width"), py::arg("x"), py::arg("y"),
        "rms bath field on a grid for a uniform surface density (row-major, y outer)");

  m.def("meissner_noise_vs_depth",
        [](double lambda, double sigma_per_m2, const std::vector<double>& depths) {
          ScreeningConfig cfg;
          cfg.lambda = lambda;
          const auto t = averaged_noise_vs_depth(cfg, sigma_per_m2, depths);
          return py::make_tuple(to_array(t.db), to_array(t.db_free), to_array(t.enhancement));
        },
        py::arg("lambda_m"), py::arg("sigma_per_m2"), py::arg("depths"));

  m.def("run_subcommand", [](const std::string& name, const std::string& preset,
                             const std::map<std::string, std::string>& overrides,
                             const std::string& out_dir) {
    ScenarioParams p = ScenarioParams::preset_named(preset);
    for (const auto& [k, v] : overrides) p.apply_override(k + "=" + v);
    return run_subcommand(name, p, out_dir);
  }, py::arg("name"), py::arg("preset") = "res1",
     py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("out_dir") = ".",
     "Run a CLI pipeline; returns the list of files written");
}
