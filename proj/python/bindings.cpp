// Python extension. Instances and results cross the boundary as JSON text; the package
// wrapper converts them to and from dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cloudprice/deadline.hpp"
#include "cloudprice/demand.hpp"
#include "cloudprice/error.hpp"
#include "cloudprice/fairness.hpp"
#include "cloudprice/io.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/sweep.hpp"
#include "cloudprice/trace.hpp"
#include "cloudprice/verify.hpp"

namespace py = pybind11;
namespace cp = cloudprice;
using nlohmann::json;

namespace {

cp::Instance parse_instance(const std::string& text) {
  try {
    return cp::instance_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw cp::InputError(std::string("instance JSON: ") + e.what());
  }
}

cp::SolverConfig config(double tol) {
  cp::SolverConfig cfg;
  cfg.tolerance = tol;
  cp::validate(cfg);
  return cfg;
}

std::string optimize(const std::string& instance, const std::string& plan, double nu, double beta,
                     double tol) {
  const auto inst = parse_instance(instance);
  const auto res = cp::barrier_optimize(inst, cp::parse_plan_kind(plan), {nu, beta}, config(tol));
  return cp::solve_result_to_json(inst, res).dump();
}

std::string evaluate_plan(const std::string& instance, const std::string& plan,
                          const std::vector<double>& prices) {
  const auto inst = parse_instance(instance);
  const cp::PlanParameterization param(inst, cp::parse_plan_kind(plan));
  const auto p = param.plan(prices);
  return cp::outcome_to_json(inst, cp::evaluate(inst, p)).dump();
}

std::string sweep(const std::string& instance, const std::string& parameter, double start,
                  double stop, std::size_t steps, const std::vector<double>& nus, double beta,
                  const std::vector<std::string>& plans) {
  const auto inst = parse_instance(instance);
  auto spec = cp::SweepSpec::for_parameter(parameter);
  spec.start = start;
  spec.stop = stop;
  spec.steps = steps;
  spec.nus = nus;
  spec.beta = beta;
  spec.plans.clear();
  for (const auto& p : plans) spec.plans.push_back(cp::parse_plan_kind(p));
  cp::validate(spec, inst);
  return cp::sweep_csv(inst, cp::run_sweep(inst, spec));
}

std::string schedule(const std::string& horizon, const std::string& plan, double beta,
                     double gamma, double tol) {
  const auto spec = cp::horizon_from_json(json::parse(horizon));
  const auto program = cp::build_program(spec, beta, gamma, cp::parse_plan_kind(plan));
  return cp::horizon_result_to_json(program, cp::solve_horizon(program, config(tol))).dump();
}

py::dict cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                 std::size_t restarts, std::uint64_t seed) {
  const auto model = cp::kmeans(points, {k, restarts, seed, 300});
  py::dict d;
  d["centroids"] = model.centroids;
  d["counts"] = model.counts;
  d["assignment"] = model.assignment;
  d["inertia"] = model.inertia;
  d["history"] = model.history;
  return d;
}

std::vector<py::dict> verify(const std::vector<std::string>& scopes, bool break_demand) {
  std::vector<py::dict> out;
  for (const auto& r : cp::run_verification({scopes, break_demand, 7})) {
    py::dict d;
    d["scope"] = r.scope;
    d["name"] = r.name;
    d["anchor"] = r.anchor;
    d["passed"] = r.passed;
    d["detail"] = r.detail;
    out.push_back(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-resource cloud pricing core";
  py::register_exception<cp::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<cp::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  m.def("optimal_demand",
        [](double alpha, double c, double cost, double gamma) {
          return cp::optimal_demand({alpha, c}, cost, gamma);
        },
        py::arg("alpha"), py::arg("c"), py::arg("cost"), py::arg("gamma") = 1.0);
  m.def("net_utility",
        [](double alpha, double c, double cost, double gamma) {
          return cp::net_utility({alpha, c}, cost, gamma);
        },
        py::arg("alpha"), py::arg("c"), py::arg("cost"), py::arg("gamma") = 1.0);
  m.def("beta_fairness",
        [](const std::vector<double>& u, double beta) { return cp::beta_fairness(u, beta); },
        py::arg("utilities"), py::arg("beta"));
  m.def("beta_lambda_fairness",
        [](const std::vector<double>& u, double beta, double lambda) {
          return cp::beta_lambda_fairness(u, {beta, lambda});
        },
        py::arg("utilities"), py::arg("beta"), py::arg("lambda_"));
  m.def("reference_instance_json",
        [](double cpu, double mem, double gamma) {
          return cp::instance_to_json(cp::reference_instance(cpu, mem, gamma)).dump();
        },
        py::arg("cpu") = 6.0, py::arg("mem") = 6.0, py::arg("gamma") = 1.0);
  m.def("optimize_json", &optimize, py::arg("instance"), py::arg("plan"), py::arg("nu"),
        py::arg("beta"), py::arg("tol"));
  m.def("evaluate_json", &evaluate_plan, py::arg("instance"), py::arg("plan"), py::arg("prices"));
  m.def("bundled_price",
        [](const std::string& instance) { return cp::bundled_price_bisection(parse_instance(instance)); },
        py::arg("instance"));
  m.def("concavity_weight_bound",
        [](const std::string& instance, double beta) {
          const auto inst = parse_instance(instance);
          return cp::concavity_weight_bound(inst, beta, inst.gamma);
        },
        py::arg("instance"), py::arg("beta"));
  m.def("sweep_csv", &sweep, py::arg("instance"), py::arg("parameter"), py::arg("start"),
        py::arg("stop"), py::arg("steps"), py::arg("nus"), py::arg("beta"), py::arg("plans"));
  m.def("schedule_json", &schedule, py::arg("horizon"), py::arg("plan"), py::arg("beta"),
        py::arg("gamma"), py::arg("tol"));
  m.def("kmeans", &cluster, py::arg("points"), py::arg("k") = 3, py::arg("restarts") = 30,
        py::arg("seed") = 1);
  m.def("verify", &verify, py::arg("scopes") = std::vector<std::string>{},
        py::arg("break_demand") = false);
}
