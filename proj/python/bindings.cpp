// Python module scatlab._core.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>

#include "scatlab/acceptance.hpp"
#include "scatlab/errors.hpp"
#include "scatlab/evolution.hpp"
#include "scatlab/flow.hpp"
#include "scatlab/random_data.hpp"
#include "scatlab/regularity.hpp"
#include "scatlab/scattering.hpp"

namespace py = pybind11;
using namespace scatlab;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> field_shape(const Grid& g) {
  std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(g.M + 1)};
  for (std::size_t a = 0; a < g.n; ++a) shape.push_back(static_cast<py::ssize_t>(g.N));
  return shape;
}

std::vector<py::ssize_t> data_shape(const DataGrid& dg) {
  return std::vector<py::ssize_t>(dg.n, static_cast<py::ssize_t>(dg.Np));
}

CArray to_array(const std::vector<cplx>& v, const std::vector<py::ssize_t>& shape) {
  CArray out(shape);
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(cplx));
  return out;
}

void from_array(std::vector<cplx>& v, const CArray& a) {
  if (static_cast<std::size_t>(a.size()) != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "array has " + std::to_string(a.size()) + " entries, expected " + std::to_string(v.size()));
  }
  std::memcpy(v.data(), a.data(), v.size() * sizeof(cplx));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parabolic scattering toolkit for time-dependent Schroedinger operators";

  static py::exception<Error> error(m, "ScatlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::enum_<RadialSign>(m, "RadialSign").value("Plus", RadialSign::Plus).value("Minus", RadialSign::Minus);
  py::enum_<FlowDirection>(m, "FlowDirection")
      .value("Forward", FlowDirection::Forward)
      .value("Backward", FlowDirection::Backward);
  py::enum_<EndpointClass>(m, "EndpointClass")
      .value("PlusRadial", EndpointClass::PlusRadial)
      .value("MinusRadial", EndpointClass::MinusRadial)
      .value("Undetermined", EndpointClass::Undetermined);

  py::class_<Grid>(m, "Grid")
      .def(py::init<>())
      .def(py::init([](std::size_t n, double L, std::size_t N, double t0, double t1, std::size_t M) {
             Grid g{n, L, N, t0, t1, M};
             g.validate();
             return g;
           }),
           py::arg("n") = 1, py::arg("L") = Grid{}.L, py::arg("N") = Grid{}.N, py::arg("t0") = Grid{}.t0,
           py::arg("t1") = Grid{}.t1, py::arg("M") = Grid{}.M)
      .def_readwrite("n", &Grid::n)
      .def_readwrite("L", &Grid::L)
      .def_readwrite("N", &Grid::N)
      .def_readwrite("t0", &Grid::t0)
      .def_readwrite("t1", &Grid::t1)
      .def_readwrite("M", &Grid::M)
      .def_property_readonly("dt", &Grid::dt)
      .def_property_readonly("dz", &Grid::dz)
      .def("time", &Grid::time)
      .def("coord", &Grid::coord)
      .def("__repr__", [](const Grid& g) {
        return "Grid(n=" + std::to_string(g.n) + ", L=" + std::to_string(g.L) + ", N=" + std::to_string(g.N) +
               ", t0=" + std::to_string(g.t0) + ", t1=" + std::to_string(g.t1) + ", M=" + std::to_string(g.M) + ")";
      });

  py::class_<DataGrid>(m, "DataGrid")
      .def_static("for_grid", &DataGrid::for_grid, py::arg("grid"), py::arg("points"))
      .def_readonly("n", &DataGrid::n)
      .def_readonly("Np", &DataGrid::Np)
      .def_readonly("dzeta", &DataGrid::dzeta)
      .def_property_readonly("zeta_max", &DataGrid::zeta_max)
      .def("zeta", &DataGrid::zeta);

  py::class_<DataFunction>(m, "DataFunction")
      .def(py::init<const DataGrid&>())
      .def_readonly("grid", &DataFunction::grid)
      .def_property(
          "values", [](const DataFunction& f) { return to_array(f.values, data_shape(f.grid)); },
          [](DataFunction& f, const CArray& a) { from_array(f.values, a); })
      .def("norm", &DataFunction::norm)
      .def("max_abs", &DataFunction::max_abs);

  py::class_<SpacetimeField>(m, "SpacetimeField")
      .def(py::init<const Grid&>())
      .def_readonly("grid", &SpacetimeField::grid)
      .def_property(
          "values", [](const SpacetimeField& u) { return to_array(u.values, field_shape(u.grid)); },
          [](SpacetimeField& u, const CArray& a) { from_array(u.values, a); })
      .def("slice_norm", &SpacetimeField::slice_norm)
      .def("norm", &SpacetimeField::norm)
      .def("max_abs", &SpacetimeField::max_abs);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def_static("zero", &PotentialSpec::zero)
      .def_static("compact_bump", &PotentialSpec::compact_bump, py::arg("amplitude"), py::arg("width_z") = 3.0,
                  py::arg("width_t") = 3.0)
      .def_readwrite("amplitude", &PotentialSpec::amplitude)
      .def_readwrite("complex_part", &PotentialSpec::complex_part)
      .def_readwrite("center_z", &PotentialSpec::center_z)
      .def_readwrite("center_t", &PotentialSpec::center_t)
      .def_readwrite("width_z", &PotentialSpec::width_z)
      .def_readwrite("width_t", &PotentialSpec::width_t);

  py::class_<PhasePoint>(m, "PhasePoint")
      .def(py::init([](std::vector<double> z, double t, std::vector<double> zeta, double tau) {
             return PhasePoint{std::move(z), t, std::move(zeta), tau};
           }),
           py::arg("z"), py::arg("t"), py::arg("zeta"), py::arg("tau"))
      .def_readwrite("z", &PhasePoint::z)
      .def_readwrite("t", &PhasePoint::t)
      .def_readwrite("zeta", &PhasePoint::zeta)
      .def_readwrite("tau", &PhasePoint::tau);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("endpoint_class", &Trajectory::endpoint_class)
      .def_readonly("final_radial_distance", &Trajectory::final_radial_distance)
      .def_readonly("max_char_violation", &Trajectory::max_char_violation)
      .def_property_readonly("s", [](const Trajectory& tr) {
        std::vector<double> s;
        for (const auto& smp : tr.samples) s.push_back(smp.s);
        return s;
      })
      .def_property_readonly("points", [](const Trajectory& tr) {
        std::vector<PhasePoint> p;
        for (const auto& smp : tr.samples) p.push_back(smp.point);
        return p;
      });

  py::class_<ExtractionReport>(m, "ExtractionReport")
      .def_readonly("limit", &ExtractionReport::limit)
      .def_readonly("times_used", &ExtractionReport::times_used)
      .def_readonly("fitted_rate", &ExtractionReport::fitted_rate);

  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &CriterionResult::id)
      .def_readonly("title", &CriterionResult::title)
      .def_readonly("passed", &CriterionResult::pass)
      .def_readonly("detail", &CriterionResult::detail)
      .def("__str__", &format_line);

  m.def("symbol_p", [](const PhasePoint& p) { return symbol_p(p); });
  m.def("rho_base", [](const std::vector<double>& z, double t) { return rho_base(z, t); });
  m.def("rho_fib", [](const std::vector<double>& zeta, double tau) { return rho_fib(zeta, tau); });
  m.def("radial_distance", py::overload_cast<const PhasePoint&, RadialSign>(&radial_distance));
  m.def("trace_bicharacteristic",
        [](const PhasePoint& seed, FlowDirection dir) { return trace_bicharacteristic(seed, dir); });

  m.def("gaussian_data", &gaussian_data, py::arg("grid"), py::arg("width") = 1.0, py::arg("center") = 0.0);
  m.def("random_data", &scatlab::random_data, py::arg("grid"), py::arg("seed"), py::arg("index") = 0);
  m.def("random_source", &random_source, py::arg("grid"), py::arg("seed"), py::arg("index") = 0);

  m.def(
      "evolve",
      [](const CArray& initial, const Grid& grid, const PotentialSpec& V) {
        std::vector<cplx> u0(grid.slice_size());
        from_array(u0, initial);
        return evolve(u0, grid, V);
      },
      py::arg("initial"), py::arg("grid"), py::arg("potential") = PotentialSpec::zero());
  m.def("apply_P", &apply_P);
  m.def("solve_retarded", &solve_retarded);
  m.def("solve_advanced", &solve_advanced);
  m.def("free_poisson", &free_poisson);
  m.def("perturbed_poisson", &perturbed_poisson);
  m.def(
      "extract_data",
      [](const SpacetimeField& u, RadialSign sign, const DataGrid& target) { return extract_data(u, sign, target); },
      py::arg("field"), py::arg("sign"), py::arg("target"));
  m.def(
      "scattering_matrix",
      [](const DataFunction& f, const Grid& grid, const PotentialSpec& V) { return scattering_matrix(f, grid, V); },
      py::arg("data"), py::arg("grid"), py::arg("potential"));

  m.def("data_norm_Wk", &data_norm_Wk);
  m.def(
      "parabolic_norm",
      [](const SpacetimeField& u, double s, double l, double flank) {
        return parabolic_norm(u, s, l, TaperOptions{flank});
      },
      py::arg("field"), py::arg("s"), py::arg("l"), py::arg("flank_fraction") = 0.1);

  m.def(
      "run_criterion", [](int id) { return run_criterion(id, AcceptanceSettings{}); }, py::arg("id"),
      "Run one acceptance criterion (1..12) with default settings.");
}
