// Command-line front end: optimize | sweep | ingest | verify | schedule.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cloudprice/deadline.hpp"
#include "cloudprice/error.hpp"
#include "cloudprice/io.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/sweep.hpp"
#include "cloudprice/trace.hpp"
#include "cloudprice/verify.hpp"

namespace cp = cloudprice;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotConverged = 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

std::vector<double> theta(const cp::PricingPlan& plan) {
  if (const auto* b = std::get_if<cp::BundledPlan>(&plan)) return {b->price};
  if (const auto* r = std::get_if<cp::ResourcePlan>(&plan)) return r->prices;
  return std::get<cp::DifferentiatedPlan>(plan).prices;
}

void print_outcome(std::ostream& os, const cp::Instance& inst, const cp::PricingPlan& plan,
                   const cp::Outcome& out) {
  os << "plan: " << cp::to_string(cp::kind_of(plan)) << "\n";
  if (const auto* b = std::get_if<cp::BundledPlan>(&plan)) {
    os << "bundle: [" << join(b->bundle) << "]\n";
  }
  os << "prices: [" << join(theta(plan)) << "]\n";
  for (std::size_t j = 0; j < inst.num_types(); ++j) {
    os << "  " << inst.user_types[j].label << ": x*=" << fmt(out.demand[j])
       << " cost=" << fmt(out.cost[j]) << " net_utility=" << fmt(out.net_utility[j]) << "\n";
  }
  os << "revenue: " << fmt(out.revenue) << "\n";
  os << "leftover:";
  for (std::size_t i = 0; i < inst.num_resources(); ++i) {
    os << " " << inst.resources.names[i] << "=" << fmt(out.leftover[i]);
  }
  os << "\n";
}

cp::SolverConfig solver_config(double tol, bool fd_hessian) {
  cp::SolverConfig cfg;
  cfg.tolerance = tol;
  cfg.analytic_hessian = !fd_hessian;
  cp::validate(cfg);
  return cfg;
}

struct OptimizeArgs {
  std::string instance, plan = "resource", out;
  double nu = 0.0, beta = 2.0, tol = 1e-6;
  std::optional<double> gamma;
  std::vector<double> bundle;
  bool fd_hessian = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  cp::Instance inst = cp::load_instance(a.instance);
  if (a.gamma) inst = cp::with_gamma(inst, *a.gamma);
  const cp::PlanKind kind = cp::parse_plan_kind(a.plan);
  const auto res = cp::barrier_optimize(inst, kind, {a.nu, a.beta}, solver_config(a.tol, a.fd_hessian),
                                        a.bundle);
  print_outcome(std::cout, inst, res.plan, res.outcome);
  std::cout << "fairness: " << fmt(res.fairness) << "\n"
            << "objective: " << fmt(res.objective) << "\n"
            << "newton_iterations: " << res.iterations << "\n"
            << "converged: " << (res.converged ? "true" : "false") << "\n";
  if (!res.diagnostics.empty()) std::cout << "diagnostics: " << res.diagnostics << "\n";
  if (!a.out.empty()) cp::write_text_file(a.out, cp::dump(cp::solve_result_to_json(inst, res)));
  return res.converged ? kOk : kNotConverged;
}

struct SweepArgs {
  std::string instance, parameter, out, svg;
  double start = 0.0, stop = 1.0, beta = 2.0, tol = 1e-6;
  std::size_t steps = 2, threads = 0;
  std::vector<double> nus{0.0};
  std::vector<std::string> plans{"bundled", "resource", "differentiated"};
  int population = 100;
  std::optional<double> gamma;
};

int cmd_sweep(const SweepArgs& a) {
  cp::Instance inst = cp::load_instance(a.instance);
  if (a.gamma) inst = cp::with_gamma(inst, *a.gamma);
  cp::SweepSpec spec = cp::SweepSpec::for_parameter(a.parameter);
  spec.start = a.start;
  spec.stop = a.stop;
  spec.steps = a.steps;
  spec.nus = a.nus;
  spec.beta = a.beta;
  spec.plans.clear();
  for (const auto& p : a.plans) spec.plans.push_back(cp::parse_plan_kind(p));
  spec.population = a.population;
  spec.solver = solver_config(a.tol, false);
  spec.threads = a.threads;
  cp::validate(spec, inst);

  const auto rows = cp::run_sweep(inst, spec);
  const std::string csv = cp::sweep_csv(inst, rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    cp::write_text_file(a.out, csv);
  }
  if (!a.svg.empty()) cp::write_text_file(a.svg, cp::sweep_svg(rows, "sweep over " + a.parameter));
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.converged;
  std::cerr << rows.size() << " rows, " << failed << " not converged\n";
  return kOk;
}

struct IngestArgs {
  std::string trace, out, report;
  std::size_t k = 3, restarts = 30;
  std::uint64_t seed = 1;
  double outlier_std = 1.0, gamma = 1.0;
  std::vector<double> capacities{6.0, 6.0}, alphas, cs;
  std::vector<int> counts;
};

int cmd_ingest(IngestArgs a) {
  const auto records = cp::parse_trace_file(a.trace);
  const auto jobs = cp::aggregate(records);
  const auto stats = cp::usage_stats(jobs);
  const auto kept = cp::filter_outliers(jobs, stats, a.outlier_std);
  std::cerr << "records: " << records.size() << "\njobs: " << stats.jobs
            << "\nmean_cpu: " << fmt(stats.mean_cpu) << " std_cpu: " << fmt(stats.std_cpu)
            << "\nmean_mem: " << fmt(stats.mean_mem) << " std_mem: " << fmt(stats.std_mem)
            << "\nkept after outlier filter: " << kept.size() << "\n";
  const auto model = cp::kmeans(cp::job_points(kept), {a.k, a.restarts, a.seed, 300});
  if (a.alphas.empty()) a.alphas.assign(a.k, 0.5);
  if (a.cs.empty()) a.cs.assign(a.k, 1.0);
  if (a.counts.empty()) {
    for (std::size_t n : model.counts) a.counts.push_back(static_cast<int>(n));
  }
  const auto report = cp::cluster_report_csv(model);
  std::cerr << report;
  if (!a.report.empty()) cp::write_text_file(a.report, report);
  const auto inst = cp::build_instance(model, a.capacities, a.gamma, a.alphas, a.cs, a.counts);
  const std::string text = cp::dump(cp::instance_to_json(inst));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    cp::write_text_file(a.out, text);
  }
  return kOk;
}

int cmd_verify(const cp::VerifyOptions& options) {
  const auto results = cp::run_verification(options);
  std::cout << cp::format_report(results);
  for (const auto& r : results) {
    if (!r.passed) return kInputError;
  }
  return kOk;
}

struct ScheduleArgs {
  std::string horizon, plan = "resource", out;
  double beta = 2.0, gamma = 1.0, tol = 1e-6;
};

int cmd_schedule(const ScheduleArgs& a) {
  const auto spec = cp::load_horizon(a.horizon);
  const auto program = cp::build_program(spec, a.beta, a.gamma, cp::parse_plan_kind(a.plan));
  for (const auto& w : program.warnings) std::cerr << "warning: " << w << "\n";
  const auto res = cp::solve_horizon(program, solver_config(a.tol, false));
  for (std::size_t s = 0; s < spec.horizon(); ++s) {
    std::cout << "interval " << s + 1 << ": ";
    if (res.plans[s]) {
      std::cout << cp::to_string(cp::kind_of(*res.plans[s])) << " prices ["
                << join(theta(*res.plans[s])) << "] revenue " << fmt(res.interval_revenue[s])
                << " fairness " << fmt(res.interval_fairness[s]) << "\n";
    } else {
      std::cout << "idle\n";
    }
  }
  for (std::size_t v = 0; v < program.variables.size(); ++v) {
    const auto& var = program.variables[v];
    std::cout << "  x[type " << var.type + 1 << ", submitted " << var.submitted + 1
              << ", processed " << var.processed + 1 << "] = " << fmt(res.schedule[v]) << "\n";
  }
  for (const auto& r : res.repairs) {
    std::cout << "repair: interval " << r.interval + 1 << " prices x" << fmt(r.factor) << "\n";
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "revenue: " << fmt(res.revenue) << "\nfairness: " << fmt(res.fairness)
            << "\nobjective: " << fmt(res.objective)
            << "\nfeasible: " << (res.feasible ? "true" : "false")
            << "\nconverged: " << (res.converged ? "true" : "false") << "\n";
  if (!a.out.empty()) cp::write_text_file(a.out, cp::dump(cp::horizon_result_to_json(program, res)));
  return res.feasible && res.converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-resource cloud pricing: optimize plans, sweep, ingest traces, verify"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Optimize one pricing plan for an instance");
  optimize->add_option("--instance", opt.instance, "Instance JSON")->required();
  optimize->add_option("--plan", opt.plan, "bundled | resource | differentiated");
  optimize->add_option("--nu", opt.nu, "Revenue weight");
  optimize->add_option("--beta", opt.beta, "Fairness exponent (> 0, != 1)");
  optimize->add_option("--gamma", opt.gamma, "Override the volume-discount exponent");
  optimize->add_option("--tol", opt.tol, "Barrier gap tolerance");
  optimize->add_option("--bundle", opt.bundle, "Bundle ratios (bundled plan)")->delimiter(',');
  optimize->add_flag("--fd-hessian", opt.fd_hessian, "Finite-difference Hessian");
  optimize->add_option("--out", opt.out, "Write the result as JSON");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Sweep capacity, population mix or discount");
  sweep->add_option("--instance", sw.instance, "Instance JSON")->required();
  sweep->add_option("--param", sw.parameter, "capacity:<resource> | mix:<type> | gamma")->required();
  sweep->add_option("--start", sw.start)->required();
  sweep->add_option("--stop", sw.stop)->required();
  sweep->add_option("--steps", sw.steps, "Grid points (>= 2)");
  sweep->add_option("--nus", sw.nus, "Comma-separated revenue weights")->delimiter(',');
  sweep->add_option("--plans", sw.plans, "Comma-separated plan kinds")->delimiter(',');
  sweep->add_option("--beta", sw.beta);
  sweep->add_option("--gamma", sw.gamma, "Override the volume-discount exponent");
  sweep->add_option("--population", sw.population, "Total users in mix sweeps");
  sweep->add_option("--threads", sw.threads, "Worker threads (0: all cores)");
  sweep->add_option("--tol", sw.tol);
  sweep->add_option("--out", sw.out, "CSV output (default stdout)");
  sweep->add_option("--svg", sw.svg, "SVG chart output");

  IngestArgs in;
  auto* ingest = app.add_subcommand("ingest", "Cluster a task trace into an instance");
  ingest->add_option("--trace", in.trace, "CSV with header time,job_id,task_id,cpu,mem")->required();
  ingest->add_option("--k", in.k, "Clusters");
  ingest->add_option("--restarts", in.restarts);
  ingest->add_option("--seed", in.seed);
  ingest->add_option("--outlier-std", in.outlier_std, "Keep jobs within this many deviations");
  ingest->add_option("--capacities", in.capacities, "cpu,mem capacities")->delimiter(',');
  ingest->add_option("--alphas", in.alphas, "Per-cluster alpha (default 0.5)")->delimiter(',');
  ingest->add_option("--cs", in.cs, "Per-cluster utility scale (default 1)")->delimiter(',');
  ingest->add_option("--counts", in.counts, "Per-cluster users (default cluster sizes)")
      ->delimiter(',');
  ingest->add_option("--gamma", in.gamma);
  ingest->add_option("--report", in.report, "Write the cluster report CSV");
  ingest->add_option("--out", in.out, "Instance JSON output (default stdout)");

  cp::VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Run the property checks");
  verify->add_option("--scope", ver.scopes, "Scopes to run (repeatable or comma-separated)")
      ->delimiter(',');
  verify->add_flag("--break-demand", ver.break_demand, "Fault injection: corrupt the demand");
  verify->add_option("--seed", ver.seed);

  ScheduleArgs sc;
  auto* schedule = app.add_subcommand("schedule", "Price and schedule a horizon with deadlines");
  schedule->add_option("--horizon,--instance", sc.horizon, "Horizon JSON")->required();
  schedule->add_option("--plan", sc.plan);
  schedule->add_option("--beta", sc.beta);
  schedule->add_option("--gamma", sc.gamma);
  schedule->add_option("--tol", sc.tol);
  schedule->add_option("--out", sc.out, "Write the result as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*optimize) return cmd_optimize(opt);
    if (*sweep) return cmd_sweep(sw);
    if (*ingest) return cmd_ingest(in);
    if (*verify) return cmd_verify(ver);
    if (*schedule) return cmd_schedule(sc);
  } catch (const cp::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const cp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
