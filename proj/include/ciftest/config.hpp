#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ciftest/bootstrap.hpp"
#include "ciftest/simulation.hpp"

namespace ciftest {

// A simulation campaign: one (model, hypothesis) scenario swept over a
// grid of sample sizes and censoring setups, with a roster of tests.
//
// File format: sections [scenario], [censoring], [tests], [mc] with
// key = value lines; '#' starts a comment. List values are separated by
// whitespace or commas; pairs use a colon (sizes 50:50, censoring
// setups rate:bound, window t1:t2). Unknown sections or keys are
// errors.
struct CampaignConfig {
  int model = 2;
  Hypothesis hypothesis = Hypothesis::h0;
  Model1Params model1;
  Model2Params model2 = model2_defaults(Hypothesis::h0);
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  Window window{0.0, 1.5};
  std::vector<CensoringSpec> setups;  // defaults to {none}
  std::vector<TestSpec> roster;
  int n_sim = 1000;
  int B = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;

  // Expands the grid into per-cell scenarios with stable ids. The cell
  // seed is derived from the master seed and the cell id, so it does not
  // depend on the position of the cell in the grid.
  std::vector<std::pair<std::string, ScenarioConfig>> cells() const;
};

CampaignConfig parse_campaign_config(std::istream& in, const std::string& name);
CampaignConfig load_campaign_config(const std::string& path);

}  // namespace ciftest
