// Python bindings for the core operations: schedule generation and
// feasibility checks, closed-form composition, pointwise evaluation and
// inversion, sharpness rows, distortion norms, and the modulus bound chain.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "fdrot/holder.hpp"
#include "fdrot/map.hpp"
#include "fdrot/modulus.hpp"
#include "fdrot/rotation.hpp"
#include "fdrot/schedule.hpp"
#include "fdrot/series.hpp"

namespace py = pybind11;
using namespace fdrot;

namespace {

py::dict chain_report_dict(const BoundChainReport& r) {
  py::dict d;
  d["log_z0"] = r.log_z0;
  d["p"] = r.p;
  d["alpha_below"] = r.alpha_below;
  d["log_n"] = r.log_n;
  d["n_winding"] = r.n_winding;
  d["log_upper"] = r.log_upper;
  d["log_lower"] = r.log_lower;
  d["log_lower_holder"] = r.log_lower_holder;
  d["log_c_f"] = r.log_c_f;
  d["log_r_f_exact"] = r.log_r_f_exact;
  d["log_r_f_holder"] = r.log_r_f_holder;
  d["log_implied_winding_bound"] = r.log_implied_winding_bound;
  d["chain_holds"] = r.chain_holds;
  d["winding_within"] = r.winding_within;
  d["r_f_consistent"] = r.r_f_consistent;
  d["pass"] = r.pass;
  d["diagnostic"] = r.diagnostic;
  return d;
}

}  // namespace

PYBIND11_MODULE(fdrot, m) {
  m.doc() =
      "Piecewise-radial planar homeomorphisms built from feasible block "
      "schedules, with exact evaluation and regularity diagnostics";

  py::class_<SchedulePlan>(m, "SchedulePlan")
      .def_readonly("p", &SchedulePlan::p)
      .def_readonly("n_blocks", &SchedulePlan::n_blocks)
      .def_property_readonly(
          "mode",
          [](const SchedulePlan& s) { return std::string(mode_name(s.mode)); })
      .def_readonly("log_r", &SchedulePlan::log_r)
      .def_readonly("log_alpha", &SchedulePlan::log_alpha)
      .def_readonly("q", &SchedulePlan::q)
      .def("log_outer_radius", &SchedulePlan::log_R, py::arg("n"))
      .def("log_lambda_after", &SchedulePlan::log_lambda_after, py::arg("n"))
      .def(
          "twist_after",
          [](const SchedulePlan& s, int n) { return s.mu_after(n).value(); },
          py::arg("n"))
      .def("log_distortion", &SchedulePlan::log_distortion, py::arg("n"))
      .def("prefix", &SchedulePlan::prefix, py::arg("n"))
      .def("to_json", &SchedulePlan::to_json_string)
      .def_static("from_json", &SchedulePlan::from_json_string,
                  py::arg("text"))
      .def("__repr__", [](const SchedulePlan& s) {
        return "<SchedulePlan p=" + std::to_string(s.p) +
               " n_blocks=" + std::to_string(s.n_blocks) + " mode=" +
               mode_name(s.mode) + ">";
      });

  py::class_<PiecewiseRadialMap>(m, "PiecewiseRadialMap")
      .def_static("identity", &PiecewiseRadialMap::identity)
      .def_property_readonly("n_blocks", &PiecewiseRadialMap::n_blocks)
      .def_property_readonly(
          "region_count",
          [](const PiecewiseRadialMap& f) { return f.regions().size(); })
      .def("eval", &PiecewiseRadialMap::eval, py::arg("z"))
      .def("inverse_eval", &PiecewiseRadialMap::inverse_eval, py::arg("w"))
      .def("radial_profile", &PiecewiseRadialMap::radial_profile,
           py::arg("t"))
      .def("arg_profile", &PiecewiseRadialMap::arg_profile, py::arg("t"))
      .def("s_log", &PiecewiseRadialMap::s_log, py::arg("u"))
      .def("inverse_s_log", &PiecewiseRadialMap::inverse_s_log,
           py::arg("log_s"))
      .def("jacobian", &PiecewiseRadialMap::jacobian, py::arg("z"))
      .def("distortion", &PiecewiseRadialMap::distortion, py::arg("z"))
      .def("to_json", &PiecewiseRadialMap::to_json_string)
      .def_static("from_json", &PiecewiseRadialMap::from_json_string,
                  py::arg("text"))
      .def("__repr__", [](const PiecewiseRadialMap& f) {
        return "<PiecewiseRadialMap blocks=" + std::to_string(f.n_blocks()) +
               " regions=" + std::to_string(f.regions().size()) + ">";
      });

  m.def(
      "generate_schedule",
      [](double p, int n_blocks, const std::string& mode,
         const std::string& gauge_family, double gauge_parameter) {
        GaugeSpec gauge;
        gauge.family = GaugeSpec::family_from_name(gauge_family);
        gauge.parameter = gauge_parameter;
        return generate_schedule(p, n_blocks, gauge, mode_from_name(mode));
      },
      py::arg("p"), py::arg("n_blocks"), py::arg("mode") = "stretch-rotation",
      py::arg("gauge_family") = "log-power", py::arg("gauge_parameter") = 0.5,
      "Greedy feasible block schedule for integrability exponent p.");

  m.def(
      "check_feasibility",
      [](const SchedulePlan& plan) {
        py::list out;
        for (const ConstraintCheck& c : check_feasibility(plan)) {
          py::dict d;
          d["name"] = c.name;
          d["pass"] = c.pass;
          d["slack_log"] = c.slack_log;
          out.append(d);
        }
        return out;
      },
      py::arg("plan"),
      "Per-constraint verdicts with log-space slack (all must pass).");

  m.def("compose_schedule", &compose_schedule, py::arg("plan"),
        "Closed-form composition of all blocks of the plan.");
  m.def("compose_schedule_stretch_only", &compose_schedule_stretch_only,
        py::arg("plan"),
        "Same composition with every twist dropped (radial factor only).");
  m.def("inverted", &inverted, py::arg("map"),
        "Exact inverse as another piecewise-radial map.");

  m.def(
      "sharpness_check",
      [](const PiecewiseRadialMap& map, const SchedulePlan& plan) {
        py::list out;
        for (const SharpnessRow& r : sharpness_check(map, plan)) {
          py::dict d;
          d["n"] = r.n;
          d["log_r"] = r.log_r;
          d["log_lhs"] = r.log_lhs;
          d["log_rhs"] = r.log_rhs;
          d["log_excess"] = r.log_excess;
          d["pass"] = r.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("map"), py::arg("plan"),
      "Accumulated twist vs the bound shape at each block radius.");

  m.def(
      "distortion_lp_norm",
      [](const SchedulePlan& plan) {
        const LpNorm n = distortion_lp_norm(plan);
        py::dict d;
        d["log_value"] = n.log_value;
        d["value"] = n.value;
        return d;
      },
      py::arg("plan"),
      "Exact L^p norm of the distortion over the unit ball.");

  m.def(
      "verify_bound_chain",
      [](const PiecewiseRadialMap& map, const SchedulePlan& plan,
         double log_z0, double alpha_below) {
        return chain_report_dict(
            verify_bound_chain(map, plan, log_z0, alpha_below));
      },
      py::arg("map"), py::arg("plan"), py::arg("log_z0"),
      py::arg("alpha_below"),
      "Winding lower bound vs Hoelder-split upper bound at one base point.");

  m.def("winding_count", &winding_count, py::arg("map"), py::arg("z0"),
        "Floor of |unwrapped argument| / 2 pi on the circle through z0, "
        "minus one, clamped at zero.");
}
