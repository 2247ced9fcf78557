#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ciftest {

// Right-continuous piecewise-constant function with left limits. Carrier
// for every estimator and bootstrap process in this library: all of them
// jump only at observed event times.
//
// The function equals initial_value on (-inf, t_0) and value_after[i] on
// [t_i, t_{i+1}), where t_0 < t_1 < ... are the jump times.
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(double initial_value) : initial_(initial_value) {}

  // jump_times must be strictly increasing and values_after the same
  // length; throws ValidationError otherwise.
  StepFunction(double initial_value, std::vector<double> jump_times,
               std::vector<double> values_after);

  // Right-continuous evaluation: value_after of the last jump time <= t.
  double operator()(double t) const;

  // Left limit at t: value just before t.
  double left_limit(double t) const;

  double initial_value() const { return initial_; }
  std::size_t jump_count() const { return times_.size(); }
  std::span<const double> jump_times() const { return times_; }
  std::span<const double> values_after() const { return values_; }

  // Size of the jump at jump index i.
  double jump_size(std::size_t i) const {
    return values_[i] - (i == 0 ? initial_ : values_[i - 1]);
  }

 private:
  double initial_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace ciftest
