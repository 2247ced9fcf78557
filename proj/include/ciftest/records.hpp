#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ciftest/bootstrap.hpp"
#include "ciftest/data.hpp"
#include "ciftest/simulation.hpp"

namespace ciftest {

using Record = nlohmann::ordered_json;

// Jitter configuration echoed into records.
struct JitterInfo {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t ties_before = 0;
  std::size_t ties_after = 0;
};

// Machine-readable record of one test run. Re-running the recorded
// configuration reproduces the recorded numbers exactly.
Record test_record(const std::string& dataset, const TwoSampleData& data,
                   const TestSpec& spec, const Window& window, bool window_auto,
                   const TestResult& result,
                   const std::optional<JitterInfo>& jitter);

// Machine-readable record of one simulation cell.
Record simulation_cell_record(const std::string& cell_id,
                              const ScenarioConfig& config,
                              std::uint64_t master_seed,
                              const RejectionTable& table);

// Appends one record per line to a results log (created if missing).
void append_record(const std::string& path, const Record& record);

}  // namespace ciftest
