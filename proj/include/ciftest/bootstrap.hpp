#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciftest/data.hpp"
#include "ciftest/multipliers.hpp"
#include "ciftest/statistics.hpp"
#include "ciftest/step_function.hpp"

namespace ciftest {

// ---------------------------------------------------------------------
// Wild bootstrap processes.
//
// Instead of resampling subjects, the wild bootstrap perturbs the
// observed event increments with i.i.d. mean-zero unit-variance
// multipliers. One realization for group j, evaluated at t, is
//
//   V*(t) = sqrt(n) * sum over observed events u_i <= t of
//           w_i * [S2(u_i) dN1_i + F1(u_i) dN2_i - F1(t)] / Y(u_i)
//
// with S2 = 1 - F2 the cause-2 subsurvival estimate, F1 the
// Aalen-Johansen estimate, and Y the risk set. Censored observations do
// not contribute and get no multiplier.
// ---------------------------------------------------------------------

// One multiplier per observed event of group g, in event-time order.
// eval_times must be ascending; the returned step function carries the
// process values at those times. Throws ValidationError on a multiplier
// count mismatch.
StepFunction wb_process(const TwoSampleData& data, int g,
                        std::span<const double> multipliers,
                        std::span<const double> eval_times);

// Per-subject 2x2 multiplier matrix for the tie-adjusted process, in the
// group's observation order (censored subjects included; their entries
// are unused). Layout: {G11, G12, G21, G22}.
using SubjectMultipliers = std::array<double, 4>;

// Tie-adjusted wild bootstrap process (for data whose event-time
// distributions may have atoms). Built from per-cause auxiliary
// processes with sqrt(1 - dA) diagonal weights and cross-cause
// sqrt(dA_k) terms, then integrated against 1/(1 - dA). Throws
// NumericError if any all-cause hazard increment dA equals 1 at an event
// time inside the evaluation range.
StepFunction wb_adjusted_process(const TwoSampleData& data, int g,
                                 std::span<const SubjectMultipliers> multipliers,
                                 std::span<const double> eval_times);

// Resampling statistic: the kind-matched functional of v1 - v2 over the
// window. The processes must share the same evaluation grid.
double wb_statistic(const StepFunction& v1, const StepFunction& v2, StatKind kind,
                    const Window& w);

// ---------------------------------------------------------------------
// Test procedure.
// ---------------------------------------------------------------------

// A single test configuration. For kinds abc/ks/cvm the decision is
// calibrated by the empirical bootstrap quantile; pepe is studentized by
// the bootstrap standard deviation and compared two-sided against normal
// quantiles; zabc standardizes the area statistic by bootstrap moments
// and compares one-sided against the normal quantile (a known-invalid
// procedure, kept for comparison studies).
struct TestSpec {
  StatKind kind = StatKind::abc;
  MultiplierSpec multiplier;
  bool adjusted = false;
};

// Canonical roster token, e.g. "abc:poisson:corrected".
std::string test_name(const TestSpec& spec);
// Parses "kind[:family][:corrected][:adjusted]" (tokens in any order
// after the kind). Throws ConfigError listing the valid names.
TestSpec parse_test_spec(const std::string& token);

struct ReplicateSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  double quantile = 0.0;        // empirical quantile at quantile_level
  double quantile_level = 0.0;  // 1 - alpha
};

struct TestResult {
  // Decision-scale statistic: the observed statistic for abc/ks/cvm, the
  // absolute studentized statistic for pepe, the standardized statistic
  // for zabc.
  StatisticValue statistic;
  // Underlying raw statistic: signed integrated difference for pepe, the
  // area statistic for zabc, equal to statistic.value otherwise.
  double raw_value = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  bool reject = false;
  int B = 0;
  std::uint64_t seed = 0;
  MultiplierSpec multiplier;
  bool adjusted = false;
  double alpha = 0.05;
  ReplicateSummary replicates;
  std::vector<std::string> warnings;
};

// B wild bootstrap replicates of the functional_kind statistic
// (abc/ks/cvm/pepe) for one multiplier configuration. Replicate b is a
// deterministic function of (seed, b) alone, so results are independent
// of the thread count and replicates extend consistently with B.
// threads == 1 runs the serial reference loop; any other value runs the
// OpenMP kernel (0 = library default thread count). Both produce
// bit-identical output.
std::vector<double> bootstrap_replicates(const TwoSampleData& data, const Window& w,
                                         StatKind functional_kind,
                                         const MultiplierSpec& spec, bool adjusted,
                                         int B, std::uint64_t seed, int threads = 1);

// Full test: observed statistic, B bootstrap replicates, empirical
// (1 - alpha) quantile, decision, and the add-one p-value
// (1 + #{replicates >= T}) / (B + 1). Deterministic given seed.
TestResult run_test(const TwoSampleData& data, const Window& w, StatKind kind,
                    const MultiplierSpec& spec, int B, double alpha,
                    std::uint64_t seed, bool adjusted, int threads = 1);

// Runs several tests on the same dataset, sharing multiplier draws and
// bootstrap process evaluations between tests with the same family and
// adjustment. Corrected variants reuse the uncorrected draws and scale
// the finished replicates (see below), so corrected and uncorrected
// entries in one roster are draw-for-draw comparable.
std::vector<TestResult> run_tests(const TwoSampleData& data, const Window& w,
                                  std::span<const TestSpec> roster, int B,
                                  double alpha, std::uint64_t seed,
                                  int threads = 1);

// The multiplier correction scales every draw by 1 + r_n. Because each
// bootstrap process is linear in the multipliers, this scales an
// abc/ks/pepe replicate by exactly (1 + r_n) and a cvm replicate by
// (1 + r_n)^2. The engine exploits that: it computes the uncorrected
// replicate and applies the factor to the finished value, which keeps
// the scaling relation exact in floating point.
double replicate_correction(StatKind functional_kind, std::size_t n1,
                            std::size_t n2);

}  // namespace ciftest
