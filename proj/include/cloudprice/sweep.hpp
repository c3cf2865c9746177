#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cloudprice/model.hpp"
#include "cloudprice/optimizer.hpp"
#include "cloudprice/pricing.hpp"

namespace cloudprice {

enum class SweepParameter { kCapacity, kMix, kGamma };

/// What to vary and which solves to run at every grid point.
///
/// `capacity:<resource>` sets that resource's capacity to the grid value.
/// `mix:<type label>` gives that type the grid value as its population fraction, fixes the
/// last type at `fixed_fraction`, and splits the rest evenly over the remaining types;
/// counts are fraction * population, rounded, at least 1.
/// `gamma` sets the discount exponent.
struct SweepSpec {
  SweepParameter parameter = SweepParameter::kCapacity;
  std::string target;
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = 2;
  std::vector<double> nus{0.0};
  double beta = 2.0;
  std::vector<PlanKind> plans{PlanKind::kBundled, PlanKind::kResource, PlanKind::kDifferentiated};
  int population = 100;
  double fixed_fraction = 0.1;
  SolverConfig solver;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Parses "capacity:<resource>", "mix:<label>" or "gamma".
  static SweepSpec for_parameter(const std::string& parameter);
  std::vector<double> grid() const;
};

void validate(const SweepSpec& spec, const Instance& instance);

/// Instance at one grid value of the sweep.
Instance sweep_instance(const Instance& base, const SweepSpec& spec, double value);

struct SweepRow {
  double value = 0.0;
  double nu = 0.0;
  double gamma = 1.0;
  PlanKind plan = PlanKind::kBundled;
  double revenue = 0.0;
  double fairness = 0.0;
  double equitability = 0.0;  // with lambda = 1/beta - 1
  double efficiency = 0.0;
  std::vector<double> utilities;  // per user of each type
  std::vector<double> leftover;   // per resource
  std::vector<double> prices;
  bool converged = false;
  std::string error;
};

/// One row per (grid value, nu, plan), in that nesting order. Points run on a thread pool
/// but rows are placed by index, so the output never depends on scheduling. Failed points
/// are recorded with converged = false and NaN metrics.
std::vector<SweepRow> run_sweep(const Instance& base, const SweepSpec& spec);

/// Columns: value,nu,gamma,plan,revenue,fairness,equitability,efficiency,
/// utility_<label>...,leftover_<resource>...,prices,converged. Prices are ';'-separated.
std::string sweep_csv(const Instance& base, const std::vector<SweepRow>& rows);

/// Standalone SVG: fairness against revenue, one polyline per (plan, nu) series.
std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title);

}  // namespace cloudprice
