#include "ciftest/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "ciftest/errors.hpp"

namespace ciftest {

StepFunction::StepFunction(double initial_value, std::vector<double> jump_times,
                           std::vector<double> values_after)
    : initial_(initial_value),
      times_(std::move(jump_times)),
      values_(std::move(values_after)) {
  if (times_.size() != values_.size()) {
    throw ValidationError("step function: jump times and values differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) {
      throw ValidationError("step function: non-finite jump time");
    }
    if (i > 0 && !(times_[i - 1] < times_[i])) {
      throw ValidationError("step function: jump times not strictly increasing");
    }
  }
}

double StepFunction::operator()(double t) const {
  // Index of the first jump time > t; the value in force at t belongs to
  // the preceding jump.
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

}  // namespace ciftest
