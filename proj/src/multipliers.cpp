#include "ciftest/multipliers.hpp"

#include "ciftest/errors.hpp"

namespace ciftest {

std::string to_string(MultiplierFamily family) {
  switch (family) {
    case MultiplierFamily::normal: return "normal";
    case MultiplierFamily::poisson: return "poisson";
    case MultiplierFamily::rademacher: return "rademacher";
  }
  return "?";
}

MultiplierFamily multiplier_family_from_string(const std::string& name) {
  if (name == "normal") return MultiplierFamily::normal;
  if (name == "poisson") return MultiplierFamily::poisson;
  if (name == "rademacher") return MultiplierFamily::rademacher;
  throw ConfigError("unknown multiplier family '" + name +
                    "'; expected one of normal, poisson, rademacher");
}

double draw_multiplier(MultiplierFamily family, Xoshiro256pp& rng) {
  switch (family) {
    case MultiplierFamily::normal: return rng.normal();
    case MultiplierFamily::poisson: return static_cast<double>(rng.poisson_unit()) - 1.0;
    case MultiplierFamily::rademacher: return rng.rademacher();
  }
  return 0.0;
}

std::vector<double> draw_multipliers(const MultiplierSpec& spec, std::size_t count,
                                     std::size_t n1, std::size_t n2,
                                     Xoshiro256pp& rng) {
  std::vector<double> out(count);
  for (double& w : out) w = draw_multiplier(spec.family, rng);
  if (spec.corrected) {
    const double factor = correction_factor(n1, n2);
    for (double& w : out) w *= factor;
  }
  return out;
}

}  // namespace ciftest
