#include "cloudprice/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cloudprice/error.hpp"

namespace cloudprice {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be positive");
  if (beta == 1.0) throw InputError("beta = 1 is not supported");
}

void check_utilities(std::span<const double> utilities) {
  if (utilities.empty()) throw InputError("fairness needs at least one utility");
  for (std::size_t j = 0; j < utilities.size(); ++j) {
    if (!(utilities[j] > 0.0) || !std::isfinite(utilities[j])) {
      throw InputError("utility " + std::to_string(j) + " must be positive and finite, got " +
                       std::to_string(utilities[j]));
    }
  }
}

// log(sum_j u_j^power), evaluated stably.
double log_power_sum(std::span<const double> utilities, double power) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double u : utilities) peak = std::max(peak, power * std::log(u));
  double acc = 0.0;
  for (double u : utilities) acc += std::exp(power * std::log(u) - peak);
  return peak + std::log(acc);
}

double log_sum(std::span<const double> utilities) {
  double total = 0.0;
  for (double u : utilities) total += u;
  return std::log(total);
}

}  // namespace

double beta_fairness(std::span<const double> utilities, double beta) {
  check_beta(beta);
  check_utilities(utilities);
  const double power = 1.0 - beta;
  if (beta >= kLogDomainBeta) {
    // Magnitudes like u^-19 overflow long before their sum is meaningless.
    return std::exp(log_power_sum(utilities, power)) / power;
  }
  double acc = 0.0;
  for (double u : utilities) acc += std::pow(u, power);
  return acc / power;
}

double beta_lambda_fairness(std::span<const double> utilities, const FairnessSpec& spec) {
  check_beta(spec.beta);
  check_utilities(utilities);
  const double b = spec.beta;
  const double log_mag =
      log_power_sum(utilities, 1.0 - b) / b + (spec.lambda + 1.0 - 1.0 / b) * log_sum(utilities);
  const double sign = b < 1.0 ? 1.0 : -1.0;
  return sign * std::exp(log_mag);
}

FairnessSplit equitability_efficiency_split(std::span<const double> utilities,
                                            const FairnessSpec& spec) {
  check_beta(spec.beta);
  check_utilities(utilities);
  const double b = spec.beta;
  const double ls = log_sum(utilities);
  const double sign = b < 1.0 ? 1.0 : -1.0;
  FairnessSplit split;
  split.efficiency = std::exp(spec.lambda * ls);
  split.equitability = sign * std::exp(log_power_sum(utilities, 1.0 - b) / b + (1.0 - 1.0 / b) * ls);
  return split;
}

std::vector<double> expand_by_count(const Instance& instance, std::span<const double> per_type) {
  if (per_type.size() != instance.num_types()) throw InputError("one value per type expected");
  std::vector<double> out;
  for (std::size_t j = 0; j < per_type.size(); ++j) {
    out.insert(out.end(), static_cast<std::size_t>(instance.user_types[j].count), per_type[j]);
  }
  return out;
}

double jobs_processable(std::span<const double> allocation, std::span<const double> requirement,
                        JobCountMode mode) {
  if (allocation.size() != requirement.size()) {
    throw InputError("allocation and requirement differ in length");
  }
  bool any = false;
  double jobs = mode == JobCountMode::kMin ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < requirement.size(); ++i) {
    if (requirement[i] < 0.0 || allocation[i] < 0.0) {
      throw InputError("allocations and requirements must be nonnegative");
    }
    if (requirement[i] == 0.0) continue;
    any = true;
    const double ratio = allocation[i] / requirement[i];
    jobs = mode == JobCountMode::kMin ? std::min(jobs, ratio) : std::max(jobs, ratio);
  }
  if (!any) throw InputError("requirement vector is all zero");
  return jobs;
}

bool envy_free(const std::vector<std::vector<double>>& allocations,
               const std::vector<std::vector<double>>& requirements, EnvyOptions options) {
  if (allocations.size() != requirements.size()) {
    throw InputError("one allocation per requirement vector expected");
  }
  const std::size_t n = allocations.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double own = jobs_processable(allocations[j], requirements[j], options.mode);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double other = jobs_processable(allocations[k], requirements[j], options.mode);
      if (options.strict ? !(own > other) : own < other) return false;
    }
  }
  return true;
}

bool pareto_dominates(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) return false;
  bool strict = false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] < v[j]) return false;
    strict = strict || u[j] > v[j];
  }
  return strict;
}

bool pareto_probe(const FairnessSpec& spec, std::span<const double> u, std::span<const double> v) {
  if (!pareto_dominates(u, v)) throw InputError("pareto_probe: u must Pareto-dominate v");
  return beta_lambda_fairness(u, spec) > beta_lambda_fairness(v, spec);
}

}  // namespace cloudprice
