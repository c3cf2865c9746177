#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cloudprice {

struct VerifyOptions {
  std::vector<std::string> scopes;  // empty: every scope
  bool break_demand = false;        // fault hook: flips the sign of the demand exponent
  std::uint64_t seed = 7;
};

struct PropertyResult {
  std::string scope;
  std::string name;
  std::string anchor;  // the model property being checked
  bool passed = false;
  std::string detail;
};

/// demand, pricing, fairness, optimizer, bounds, deadline, trace.
const std::vector<std::string>& verify_scopes();

/// Runs the property checks of the selected scopes. Throws InputError for unknown scopes.
std::vector<PropertyResult> run_verification(const VerifyOptions& options);

/// One "PASS|FAIL [scope] name (anchor): detail" line per property plus a summary line.
std::string format_report(const std::vector<PropertyResult>& results);

}  // namespace cloudprice
