#pragma once

#include <vector>

#include "ciftest/data.hpp"
#include "ciftest/rng.hpp"

namespace ciftest::testing {

struct DatasetOptions {
  std::size_t max_group_size = 200;
  bool allow_ties = true;
  bool allow_truncation = true;
  double censoring_prob = 0.3;
};

// Random datasets for property tests. Tie-prone times come from a
// coarse grid, tie-free ones from a continuous draw.
inline std::vector<Observation> random_records(Xoshiro256pp& rng,
                                               const DatasetOptions& opt = {}) {
  std::vector<Observation> records;
  for (int g = 1; g <= 2; ++g) {
    const std::size_t n =
        1 + static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(opt.max_group_size));
    for (std::size_t i = 0; i < n; ++i) {
      Observation obs;
      obs.group = g;
      if (opt.allow_ties && rng.uniform() < 0.5) {
        obs.exit = 0.25 * (1.0 + std::floor(rng.uniform() * 12.0));
      } else {
        obs.exit = rng.exponential(1.0) + 1e-4;
      }
      if (opt.allow_truncation && rng.uniform() < 0.3) {
        obs.entry = obs.exit * rng.uniform() * 0.9;
      }
      const double u = rng.uniform();
      obs.status = u < opt.censoring_prob ? 0 : (u < 0.5 + opt.censoring_prob / 2 ? 1 : 2);
      records.push_back(obs);
    }
  }
  return records;
}

}  // namespace ciftest::testing
