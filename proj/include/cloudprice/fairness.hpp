#pragma once

#include <span>
#include <vector>

#include "cloudprice/model.hpp"
#include "cloudprice/pricing.hpp"

namespace cloudprice {

/// Equitability exponent beta (> 0, != 1) and efficiency exponent lambda.
struct FairnessSpec {
  double beta = 2.0;
  double lambda = -0.5;
};

/// lambda = 1/beta - 1, the choice under which the beta-lambda family orders outcomes
/// exactly like beta-fairness.
inline double matching_lambda(double beta) { return 1.0 / beta - 1.0; }

// Sums at or above this beta are evaluated in the log domain.
constexpr double kLogDomainBeta = 10.0;

/// (1/(1-beta)) * sum_j u_j^(1-beta). Requires every u_j > 0.
double beta_fairness(std::span<const double> utilities, double beta);

/// sgn(1-beta) (sum u^(1-beta))^(1/beta) (sum u)^(lambda + 1 - 1/beta).
double beta_lambda_fairness(std::span<const double> utilities, const FairnessSpec& spec);

struct FairnessSplit {
  double equitability = 0.0;  // scale invariant factor
  double efficiency = 0.0;    // (sum u)^lambda
};

FairnessSplit equitability_efficiency_split(std::span<const double> utilities,
                                            const FairnessSpec& spec);

/// Per-user utilities, each type's value repeated `count` times.
std::vector<double> expand_by_count(const Instance& instance, std::span<const double> per_type);

enum class JobCountMode {
  kMin,  // a job needs every resource: jobs = min_i alloc_i / R_i
  kMax,  // literal reading: jobs = max_i alloc_i / R_i
};

struct EnvyOptions {
  JobCountMode mode = JobCountMode::kMin;
  bool strict = false;
};

/// Jobs a user with per-job requirement `requirement` can run on `allocation`.
/// Resources the user does not need are ignored.
double jobs_processable(std::span<const double> allocation, std::span<const double> requirement,
                        JobCountMode mode);

/// True iff no user could process more jobs with another user's allocation.
/// allocations[j][i] is the amount of resource i given to user j.
bool envy_free(const std::vector<std::vector<double>>& allocations,
               const std::vector<std::vector<double>>& requirements, EnvyOptions options = {});

/// True iff u_j >= v_j everywhere and u_k > v_k somewhere.
bool pareto_dominates(std::span<const double> u, std::span<const double> v);

/// Whether the beta-lambda fairness ranks the dominating vector `u` strictly above `v`.
/// Throws InputError when `u` does not Pareto-dominate `v`.
bool pareto_probe(const FairnessSpec& spec, std::span<const double> u, std::span<const double> v);

}  // namespace cloudprice
