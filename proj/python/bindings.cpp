// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "critdelay/commensurate.hpp"
#include "critdelay/errors.hpp"
#include "critdelay/free_delay.hpp"
#include "critdelay/model.hpp"
#include "critdelay/scalar_forms.hpp"
#include "critdelay/tensor_linalg.hpp"

namespace py = pybind11;
using namespace critdelay;

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Critical delays of linear delay-differential equations via "
            "structured eigenvalue problems";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<solver_error>(m, "SolverError", PyExc_RuntimeError);

  py::class_<DdeSystem>(m, "DdeSystem")
      .def(py::init<>())
      .def_readwrite("n", &DdeSystem::n)
      .def_readwrite("m", &DdeSystem::m)
      .def_readwrite("matrices", &DdeSystem::matrices)
      .def("validate", &DdeSystem::validate);

  m.def("load_system", &load_system, py::arg("path"));
  m.def("save_system", &save_system, py::arg("sys"), py::arg("path"));
  m.def("parse_system", &parse_system, py::arg("text"));
  m.def("serialize_system", &serialize_system, py::arg("sys"));
  m.def("build_heat_system", &build_heat_system, py::arg("n"),
        py::arg("beta"), py::arg("kappa"), py::arg("x_feedback"));

  m.def(
      "eval_char_matrix",
      [](const DdeSystem &sys, std::complex<double> s,
         const Eigen::VectorXd &delays) {
        return eval_char_matrix(sys, s, delays).entries;
      },
      py::arg("sys"), py::arg("s"), py::arg("delays"),
      "Characteristic matrix -sI + A0 + sum_k A_k exp(-h_k s)");
  m.def(
      "smallest_singular_value",
      [](const Eigen::MatrixXcd &M) {
        CharMatrix wrapped;
        wrapped.entries = M;
        return smallest_singular_value(wrapped);
      },
      py::arg("matrix"));

  m.def("kron", &kron, py::arg("a"), py::arg("b"));
  m.def("vec", &vec, py::arg("x"));
  m.def("unvec", &unvec, py::arg("u"));

  py::class_<RankOneFactor>(m, "RankOneFactor")
      .def_readonly("v", &RankOneFactor::v)
      .def_readonly("gap", &RankOneFactor::gap);
  m.def("rank_one_factor", &rank_one_factor, py::arg("u"), py::arg("tol"),
        "Dominant Hermitian rank-one factor of a reshaped vector, or None "
        "when the gap exceeds tol");

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("delta", &SweepConfig::delta)
      .def_readwrite("p_max", &SweepConfig::p_max)
      .def_readwrite("h_max", &SweepConfig::h_max)
      .def_readwrite("unit_tol", &SweepConfig::unit_tol)
      .def_readwrite("omega_tol", &SweepConfig::omega_tol)
      .def_readwrite("residual_tol", &SweepConfig::residual_tol)
      .def_readwrite("gap_tol", &SweepConfig::gap_tol)
      .def_readwrite("use_cayley", &SweepConfig::use_cayley)
      .def("validate", &SweepConfig::validate)
      .def("resolved_residual_tol", &SweepConfig::resolved_residual_tol,
           py::arg("sys"));

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("phi", &CriticalPoint::phi)
      .def_readonly("z", &CriticalPoint::z)
      .def_readonly("omega", &CriticalPoint::omega)
      .def_readonly("v", &CriticalPoint::v)
      .def_readonly("residual", &CriticalPoint::residual)
      .def_readonly("gap", &CriticalPoint::gap)
      .def_readonly("delays", &CriticalPoint::delays)
      .def_readonly("branches", &CriticalPoint::branches)
      .def_readonly("base_delay", &CriticalPoint::base_delay)
      .def_readonly("base_branch", &CriticalPoint::base_branch);

  py::class_<InfiniteMode>(m, "InfiniteMode")
      .def_readonly("v", &InfiniteMode::v)
      .def_readonly("u", &InfiniteMode::u)
      .def_readonly("phi", &InfiniteMode::phi)
      .def_readonly("omega", &InfiniteMode::omega)
      .def_readonly("g_residual", &InfiniteMode::g_residual)
      .def_readonly("valid", &InfiniteMode::valid)
      .def_readonly("hint", &InfiniteMode::hint);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("points", &SweepResult::points)
      .def_readonly("infinite_modes", &SweepResult::infinite_modes)
      .def_readonly("rejected_by_reason", &SweepResult::rejected_by_reason);

  m.def("sweep", &sweep, py::arg("sys"), py::arg("config"),
        py::arg("threads") = 1,
        "Grid sweep of the free angles; returns accepted critical points, "
        "delay-independent modes, and rejection counts");

  py::class_<CommensurateResult>(m, "CommensurateResult")
      .def_readonly("points", &CommensurateResult::points)
      .def_readonly("rejected_by_reason",
                    &CommensurateResult::rejected_by_reason);

  m.def("critical_delays_commensurate", &critical_delays_commensurate,
        py::arg("sys"), py::arg("direction"), py::arg("config"),
        "Critical base delays along an integer delay ray");

  py::class_<ScalarSystem>(m, "ScalarSystem")
      .def(py::init<>())
      .def_readwrite("a", &ScalarSystem::a)
      .def("m", &ScalarSystem::m);

  py::class_<ScalarCriticalPoint>(m, "ScalarCriticalPoint")
      .def_readonly("delays", &ScalarCriticalPoint::delays)
      .def_readonly("omega", &ScalarCriticalPoint::omega);

  py::class_<TwoDelayPoint>(m, "TwoDelayPoint")
      .def_readonly("h1", &TwoDelayPoint::h1)
      .def_readonly("h2", &TwoDelayPoint::h2)
      .def_readonly("omega", &TwoDelayPoint::omega);

  py::class_<SingleDelayResult>(m, "SingleDelayResult")
      .def_readonly("crossing", &SingleDelayResult::crossing)
      .def_readonly("h", &SingleDelayResult::h)
      .def_readonly("omega", &SingleDelayResult::omega);

  m.def("scalar_critical_delays", &scalar_critical_delays, py::arg("sys"),
        py::arg("phi"), py::arg("sign_choice"), py::arg("branches"));
  m.def("two_delay_parametrization", &two_delay_parametrization,
        py::arg("a0"), py::arg("a1"), py::arg("a2"), py::arg("phi"),
        py::arg("sign_choice"), py::arg("p"), py::arg("q"));
  m.def("gu_example_parameterization", &gu_example_parameterization,
        py::arg("omega"), py::arg("sign_choice"), py::arg("p"), py::arg("q"));
  m.def("single_delay_scalar", &single_delay_scalar, py::arg("a0"),
        py::arg("a1"));
}
