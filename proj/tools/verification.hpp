#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "feig/feigenbaum_map.hpp"

namespace feig::verify {

enum class Suite { core, ifs, markov, dim, all };

/// Parses "core", "ifs", "markov", "dim" or "all"; false otherwise.
bool parse_suite(const std::string& name, Suite& out);

enum class Status { pass, fail, report_only };
const char* to_string(Status s);

struct CheckResult {
  int id = 0;  // 1..19 for the acceptance criteria, 0 for report-only extras
  std::string name;
  std::string anchor;  // the claim the check exercises
  Status status = Status::fail;
  nlohmann::json measured = nlohmann::json::object();
  std::string tolerance;
  double seconds = 0.0;  // wall time, kept out of the JSON report
};

/// Runs the checks of a suite in order, calling `on_result` after each.
/// Exceptions inside a check turn into a failed result carrying the message.
std::vector<CheckResult> run_suite(const FeigenbaumMap& map, Suite suite, std::uint64_t seed,
                                   const std::function<void(const CheckResult&)>& on_result = {});

/// {"suite", "seed", "c": {"re", "im", "defect"}, "checks": [...]}; byte
/// identical for identical inputs.
nlohmann::json report_json(const FeigenbaumMap& map, const std::string& suite, std::uint64_t seed,
                           const std::vector<CheckResult>& results);

}  // namespace feig::verify
