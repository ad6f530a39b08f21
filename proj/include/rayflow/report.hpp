#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace rayflow {

/// Named quantitative outcome of a verification suite. `pass` is a pure
/// function of the metrics and the thresholds documented in
/// tolerance_spec; inputs record what produced the numbers.
struct VerificationReport {
  std::string name;
  std::map<std::string, std::string> inputs;
  std::map<std::string, double> metrics;
  bool pass = false;
  std::string tolerance_spec;
};

inline nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) j["inputs"][k] = v;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  j["pass"] = r.pass;
  j["tolerance_spec"] = r.tolerance_spec;
  return j;
}

}  // namespace rayflow
