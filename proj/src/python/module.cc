// Copyright 2026 The mialloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "mialloc/anp.h"
#include "mialloc/baseline_pd.h"
#include "mialloc/cr_pursuit.h"
#include "mialloc/cr_table.h"
#include "mialloc/errors.h"
#include "mialloc/generators.h"
#include "mialloc/instance.h"
#include "mialloc/instance_io.h"
#include "mialloc/offline.h"
#include "mialloc/report.h"
#include "mialloc/revenue.h"
#include "mialloc/suite.h"

namespace py = pybind11;

namespace mialloc {
namespace {

py::dict OfflineToDict(const OfflineSolution& s) {
  py::dict d;
  d["objective"] = s.objective;
  d["dual_value"] = s.dual_value;
  d["gap"] = s.gap;
  d["v"] = s.v;
  d["alpha"] = s.capacity_multipliers;
  d["beta"] = s.allowance_multipliers;
  return d;
}

}  // namespace
}  // namespace mialloc

PYBIND11_MODULE(_core, m) {
  using namespace mialloc;
  m.doc() = "Online allocation across multiple inventories.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InvalidInstanceError>(m, "InvalidInstanceError",
                                               base.ptr());
  py::register_exception<InfeasibleTargetError>(m, "InfeasibleTargetError",
                                                base.ptr());
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError",
                                              base.ptr());
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError",
                                              base.ptr());

  m.def("pi_one", &PiOne, py::arg("theta"));
  m.def("pi_two", &PiTwo, py::arg("theta"));
  m.def("alpha", &Alpha, py::arg("pi"));
  m.def("large_n_ratio", &LargeNRatio, py::arg("pi"));
  m.def("competitive_bound", &CompetitiveBound, py::arg("theta"), py::arg("N"));
  m.def("lambert_w", &LambertW, py::arg("x"));
  m.def("chi", [](double theta) {
    const ChiValues c = Chi(theta);
    return py::make_tuple(c.chi, c.chi_tilde);
  }, py::arg("theta"), "Returns (chi, chi_tilde).");

  py::class_<RevenueFunction>(m, "RevenueFunction")
      .def_static("linear", &RevenueFunction::Linear, py::arg("slope"),
                  py::arg("delta"))
      .def_static("piecewise_linear", &RevenueFunction::PiecewiseLinear,
                  py::arg("slopes"), py::arg("breakpoints"), py::arg("delta"))
      .def_static("exp_saturation", &RevenueFunction::ExpSaturation,
                  py::arg("floor"), py::arg("peak"), py::arg("scale"),
                  py::arg("delta"))
      .def_static("price_elastic", &RevenueFunction::PriceElastic,
                  py::arg("price"), py::arg("coef"), py::arg("exponent"),
                  py::arg("delta"))
      .def_property_readonly("delta", &RevenueFunction::delta)
      .def_property_readonly("kind", [](const RevenueFunction& g) {
        return std::string(KindName(g.kind()));
      })
      .def("__call__", &RevenueFunction::Eval, py::arg("v"))
      .def("derivative", &RevenueFunction::Derivative, py::arg("v"))
      .def("inverse", &RevenueFunction::InverseEval, py::arg("y"))
      .def("conjugate", &RevenueFunction::Conjugate, py::arg("price"))
      .def("demand", [](const RevenueFunction& g, double price) {
        const Demand d = g.DemandAt(price);
        return py::make_tuple(d.lo, d.hi);
      }, py::arg("price"))
      .def("scaled", &RevenueFunction::Scaled, py::arg("pi"))
      .def("with_rate_limit", &RevenueFunction::WithRateLimit, py::arg("limit"))
      .def("to_json", [](const RevenueFunction& g) {
        return RevenueToJson(g).dump();
      });

  py::class_<Instance>(m, "Instance")
      .def_static("from_json", &ParseInstance, py::arg("text"))
      .def_static("read", &ReadInstanceFile, py::arg("path"))
      .def("to_json", &SerializeInstance)
      .def("write", [](const Instance& inst, const std::string& path) {
        WriteInstanceFile(inst, path);
      }, py::arg("path"))
      .def_property_readonly("id", &InstanceId)
      .def_property_readonly("T", &Instance::num_slots)
      .def_property_readonly("N", &Instance::num_inventories)
      .def_property_readonly("theta", &Instance::theta)
      .def_property_readonly("p_min", &Instance::p_min)
      .def_property_readonly("p_max", &Instance::p_max)
      .def_property_readonly("revenue_class", [](const Instance& inst) {
        return std::string(ClassName(inst.revenue_class()));
      })
      .def_property_readonly("capacity", [](const Instance& inst) {
        return inst.capacity();
      })
      .def_property_readonly("allowance", [](const Instance& inst) {
        return inst.allowance();
      })
      .def("revenue", &Instance::revenue, py::arg("t"), py::arg("i"))
      .def("__eq__", &Instance::operator==);

  m.def("gen_random", [](std::uint64_t seed, int N, int T, double theta,
                         const std::string& cls) {
    return GenRandom(seed, N, T, theta, ParseClass(cls));
  }, py::arg("seed"), py::arg("N"), py::arg("T"), py::arg("theta"),
     py::arg("revenue_class") = "gradient_bounded");
  m.def("gen_staircase", &GenStaircase, py::arg("theta"), py::arg("T"),
        py::arg("C") = 1.0, py::arg("N") = 1);

  m.def("solve_single", [](const std::vector<RevenueFunction>& fns,
                           double capacity) {
    const SingleSolution s = SolveSingle(fns, capacity);
    py::dict d;
    d["objective"] = s.objective;
    d["dual_value"] = s.dual_value;
    d["gap"] = s.gap;
    d["multiplier"] = s.multiplier;
    d["v"] = s.v;
    return d;
  }, py::arg("revenues"), py::arg("capacity"));
  m.def("solve_multi", [](const Instance& inst, int upto) {
    return OfflineToDict(SolveMulti(inst, upto > 0 ? upto : inst.num_slots()));
  }, py::arg("instance"), py::arg("upto") = 0);
  m.def("oracle_grid", &OracleGrid, py::arg("instance"), py::arg("step"),
        py::arg("budget") = 1e7);

  m.def("run_json", [](const Instance& inst, const std::string& algorithm,
                       double pi) {
    py::gil_scoped_release release;
    return ReportToJson(RunAlgorithm(algorithm, inst, pi), true).dump();
  }, py::arg("instance"), py::arg("algorithm"), py::arg("pi") = 0.0);
  m.def("run_suite_json", [](const std::string& config, int jobs,
                             double grid_step) {
    py::gil_scoped_release release;
    SuiteOptions options;
    options.jobs = jobs;
    options.grid_step = grid_step;
    return SuiteToJson(RunSuite(nlohmann::json::parse(config), options)).dump();
  }, py::arg("config"), py::arg("jobs") = 0, py::arg("grid_step") = 0.0);
  m.def("cr_table_csv", [](const std::string& thetas, int N) {
    return CrTableCsv(CrTable(ParseThetaGrid(thetas), N));
  }, py::arg("thetas"), py::arg("N"));
}
