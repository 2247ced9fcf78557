#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ciftest/rng.hpp"

namespace ciftest {

// Multiplier families for the wild bootstrap. All have mean 0, variance
// 1 and finite fourth moment.
enum class MultiplierFamily {
  normal,      // standard normal
  poisson,     // Poisson(1) - 1
  rademacher,  // +1 / -1 with equal probability
};

std::string to_string(MultiplierFamily family);
MultiplierFamily multiplier_family_from_string(const std::string& name);

struct MultiplierSpec {
  MultiplierFamily family = MultiplierFamily::poisson;
  // Small-sample correction: scale every draw by 1 + r_n with
  // r_n = (n1 + n2)/(n1 * n2).
  bool corrected = false;
};

inline double correction_factor(std::size_t n1, std::size_t n2) {
  const double d1 = static_cast<double>(n1);
  const double d2 = static_cast<double>(n2);
  return 1.0 + (d1 + d2) / (d1 * d2);
}

double draw_multiplier(MultiplierFamily family, Xoshiro256pp& rng);

// count i.i.d. draws from the family, scaled by the correction factor
// for group sizes (n1, n2) when spec.corrected is set.
std::vector<double> draw_multipliers(const MultiplierSpec& spec, std::size_t count,
                                     std::size_t n1, std::size_t n2,
                                     Xoshiro256pp& rng);

}  // namespace ciftest
