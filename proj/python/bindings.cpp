#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "afwl/cli.hpp"
#include "afwl/dispersive.hpp"
#include "afwl/evolve.hpp"
#include "afwl/initial_data.hpp"
#include "afwl/norms.hpp"
#include "afwl/oracles.hpp"

namespace py = pybind11;
using namespace afwl;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
  const auto n = static_cast<py::ssize_t>(f.grid.n);
  py::array_t<double> out({n, n, n});
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_afwl, m) {
  m.doc() = "Wave solver for the energy-critical defocusing equation on perturbed Minkowski backgrounds";
  m.attr("__version__") = AFWL_VERSION;

  py::class_<Grid3>(m, "Grid3")
      .def(py::init([](int n, double dx) { return Grid3{n, dx}; }), py::arg("n"), py::arg("dx"))
      .def_readwrite("n", &Grid3::n)
      .def_readwrite("dx", &Grid3::dx)
      .def("half_extent", &Grid3::half_extent)
      .def("coord", &Grid3::coord);

  py::enum_<MetricFamily>(m, "MetricFamily")
      .value("Flat", MetricFamily::Flat)
      .value("StaticBump", MetricFamily::StaticBump)
      .value("TimeModulatedBump", MetricFamily::TimeModulatedBump);

  py::class_<MetricSpec>(m, "MetricSpec")
      .def(py::init<>())
      .def_readwrite("family", &MetricSpec::family)
      .def_readwrite("epsilon", &MetricSpec::epsilon)
      .def_readwrite("gamma", &MetricSpec::gamma)
      .def_readwrite("delta", &MetricSpec::delta)
      .def_readwrite("bump_radius", &MetricSpec::bump_radius)
      .def_readwrite("modulation_freq", &MetricSpec::modulation_freq)
      .def("validate", &MetricSpec::validate);

  py::enum_<DataKind>(m, "DataKind")
      .value("Zero", DataKind::Zero)
      .value("Bump", DataKind::Bump)
      .value("VelocityBump", DataKind::VelocityBump)
      .value("Gaussian", DataKind::Gaussian)
      .value("Lorentzian", DataKind::Lorentzian)
      .value("PlaneWave", DataKind::PlaneWave)
      .value("Outgoing", DataKind::Outgoing);

  py::class_<InitialDataSpec>(m, "InitialDataSpec")
      .def(py::init<>())
      .def_readwrite("kind", &InitialDataSpec::kind)
      .def_readwrite("amplitude", &InitialDataSpec::amplitude)
      .def_readwrite("width", &InitialDataSpec::width)
      .def_readwrite("radius", &InitialDataSpec::radius)
      .def_readwrite("center", &InitialDataSpec::center)
      .def_readwrite("mode", &InitialDataSpec::mode);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("cfl", &SimConfig::cfl)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("snapshot_dt", &SimConfig::snapshot_dt)
      .def_readwrite("nonlinear", &SimConfig::nonlinear)
      .def_readwrite("duhamel_tau_dt", &SimConfig::duhamel_tau_dt)
      .def_readwrite("keep_slices", &SimConfig::keep_slices)
      .def_readwrite("allow_wrap", &SimConfig::allow_wrap);

  py::class_<StateSlice>(m, "StateSlice")
      .def_readonly("t", &StateSlice::t)
      .def_property_readonly("u", [](const StateSlice& s) { return to_numpy(s.u); })
      .def_property_readonly("ut", [](const StateSlice& s) { return to_numpy(s.ut); });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("grid", &Trajectory::grid)
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("times", &Trajectory::times)
      .def_readonly("steps", &Trajectory::steps)
      .def_readonly("slices", &Trajectory::slices)
      .def_property_readonly("energy",
                             [](const Trajectory& t) {
                               std::vector<double> e;
                               for (const auto& s : t.scalars) e.push_back(s.energy);
                               return e;
                             })
      .def("__len__", &Trajectory::size);

  m.def("make_initial_data", &make_initial_data, py::arg("grid"), py::arg("spec"), py::arg("t") = 0.0);
  m.def(
      "evolve",
      [](const StateSlice& data, const MetricSpec& spec, const SimConfig& config) {
        py::gil_scoped_release release;
        return evolve(data, spec, config);
      },
      py::arg("data"), py::arg("metric"), py::arg("config"));
  m.def("flat_energy", &flat_energy);
  m.def(
      "mixed_norm", [](const Trajectory& t, double q, double r) { return mixed_norm(t, MixedNormSpec{q, r}); },
      py::arg("trajectory"), py::arg("q") = 8.0, py::arg("r") = 8.0);
  m.def("partition_count", &partition_count, py::arg("B"), py::arg("eta"));
  m.def(
      "partition_by_l8",
      [](const std::vector<double>& times, const std::vector<double>& l8_pow8, double eta) {
        const PartitionResult p = partition_by_l8(times, l8_pow8, eta);
        return py::dict(py::arg("M") = p.M, py::arg("endpoints") = p.endpoints,
                        py::arg("per_interval_l8") = p.per_interval_l8, py::arg("verified") = p.verified);
      },
      py::arg("times"), py::arg("l8_pow8"), py::arg("eta"));
  m.def(
      "theorem_bound",
      [](double E, double A, double C) {
        const BoundResult b = theorem_log_bound({E, A, C});
        return py::dict(py::arg("log_value") = b.log_value, py::arg("exponent") = b.exponent,
                        py::arg("value") = b.value);
      },
      py::arg("E"), py::arg("A") = 1.0, py::arg("C") = 1.0);
  m.def(
      "kernel_integral_oracle",
      [](double a, double delta, int sign) {
        const KernelIntegral k = kernel_integral_oracle(a, delta, sign);
        return py::dict(py::arg("value") = k.value, py::arg("tail_bound") = k.tail_bound,
                        py::arg("quad_error") = k.quad_error);
      },
      py::arg("a"), py::arg("delta"), py::arg("sign"));
  m.def(
      "fit_power_law",
      [](const std::vector<double>& times, const std::vector<double>& values, double s) {
        const DecayFit f = fit_power_law(times, values, s);
        return py::make_tuple(f.p, f.c);
      },
      py::arg("times"), py::arg("values"), py::arg("s") = 0.0);
  m.def(
      "run_cli",
      [](const std::string& subcommand, const std::string& config_path, const std::string& out_dir) {
        CliOptions opts;
        opts.subcommand = subcommand;
        opts.config_path = config_path;
        opts.out_dir = out_dir;
        std::ostringstream out, err;
        const int code = run_cli(opts, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("subcommand"), py::arg("config_path"), py::arg("out_dir") = "");
}
