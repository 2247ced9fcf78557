#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ciftest/step_function.hpp"

namespace ciftest {

// Time window [t1, t2] the hypothesis refers to.
struct Window {
  double t1 = 0.0;
  double t2 = 0.0;
};

// Throws ValidationError unless 0 <= t1 < t2 with both finite.
void validate_window(const Window& w);

enum class StatKind { abc, ks, cvm, pepe, zabc };

std::string to_string(StatKind kind);
StatKind stat_kind_from_string(const std::string& name);

struct StatisticValue {
  StatKind kind = StatKind::abc;
  double value = 0.0;
  Window window;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Evaluation grid for exact integration of step functions over w: t1,
// then every distinct jump time of f or g inside (t1, t2), then t2.
// Between consecutive grid points both functions are constant.
std::vector<double> merged_grid(const StepFunction& f, const StepFunction& g,
                                const Window& w);

// Functional of a sampled step curve over its grid. grid must end at t2;
// curve[i] is the value on [grid[i], grid[i+1]).
//   abc : integral of |curve|   ks  : sup of |curve|
//   cvm : integral of curve^2   pepe: integral of curve
double step_functional(StatKind kind, std::span<const double> grid,
                       std::span<const double> curve);

// Two-sample statistics over the window; n = n1 + n2 scales as
//   abc  : sqrt(n) * integral |F1 - F2|
//   ks   : sqrt(n) * sup |F1 - F2|
//   cvm  : n * integral (F1 - F2)^2
//   pepe : sqrt(n) * integral (F1 - F2)   (signed)
// All integrals are exact sums over the merged jump partition.
StatisticValue abc_statistic(const StepFunction& cif1, const StepFunction& cif2,
                             const Window& w, std::size_t n1, std::size_t n2);
StatisticValue ks_statistic(const StepFunction& cif1, const StepFunction& cif2,
                            const Window& w, std::size_t n1, std::size_t n2);
StatisticValue cvm_statistic(const StepFunction& cif1, const StepFunction& cif2,
                             const Window& w, std::size_t n1, std::size_t n2);
StatisticValue pepe_statistic(const StepFunction& cif1, const StepFunction& cif2,
                              const Window& w, std::size_t n1, std::size_t n2);

// Standardizes an observed area statistic by the empirical mean and
// standard deviation of its bootstrap replicates. Needs >= 2 replicates
// with positive variance; throws NumericError otherwise. The associated
// test compares the result against standard normal quantiles, which is
// known to be miscalibrated; it is provided for comparison studies.
StatisticValue zabc_statistic(double t_abc, std::span<const double> replicates,
                              const Window& w, std::size_t n1, std::size_t n2);

// Moments of a sample (sd uses the n-1 denominator).
double sample_mean(std::span<const double> x);
double sample_sd(std::span<const double> x);
double sample_skewness(std::span<const double> x);

// Standard normal distribution function and quantile function.
double standard_normal_cdf(double x);
double standard_normal_quantile(double p);

}  // namespace ciftest
