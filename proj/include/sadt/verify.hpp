#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sadt {

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::ordered_json details;  // counts, worst slack, counterexample on failure
};

struct BatteryOptions {
  std::uint64_t seed = 12345;
  bool inject_fault = false;  // negative control: corrupt one contraction input
  int workers = 4;
};

struct BatteryResult {
  std::uint64_t seed = 0;
  bool inject_fault = false;
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

// Seeded property battery over randomly generated instances.  Every check is
// a pure function of (seed, inject_fault), so the serialized verdict is
// byte-identical across runs and worker counts.
BatteryResult run_battery(const BatteryOptions& options);

nlohmann::ordered_json json_of(const BatteryResult& r);

}  // namespace sadt
