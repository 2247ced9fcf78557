#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ciftest/step_function.hpp"

namespace ciftest {

// One subject's record under left-truncation and right-censoring.
//   entry  : left-truncation time (0 when the subject was observed from
//            the start); the subject joins the risk set strictly after it.
//   exit   : observed time, min(event time, censoring time).
//   status : 0 = censored, 1 / 2 = event of the corresponding cause.
//   group  : sample label, 1 or 2.
struct Observation {
  double entry = 0.0;
  double exit = 0.0;
  int status = 0;
  int group = 1;
};

// An event time shared by several records (events only, both groups
// pooled), with its multiplicity.
struct TiedTime {
  double time = 0.0;
  int multiplicity = 0;
};

// Validated two-sample dataset with the derived quantities every
// estimator needs. Immutable after construction; safe to share across
// threads.
class TwoSampleData {
 public:
  // Group observations, sorted by (exit, status, entry). g is 1 or 2.
  const std::vector<Observation>& group(int g) const;

  std::size_t group_size(int g) const { return group(g).size(); }
  std::size_t total_size() const;

  // Number of observed events (status != 0) in group g.
  std::size_t event_count(int g) const;

  // Pooled distinct event times, strictly increasing.
  std::span<const double> event_times() const { return event_times_; }

  // Event times with multiplicity >= 2 (pooled over groups and causes).
  std::span<const TiedTime> ties() const { return ties_; }
  bool has_ties() const { return !ties_.empty(); }

  // Largest exit time in group g.
  double last_exit(int g) const;

  // Risk-set size of group g just before t: #{i : entry_i < t <= exit_i}.
  std::size_t risk_set_size(int g, double t) const;

  friend TwoSampleData validate(std::span<const Observation> records);

 private:
  std::array<std::vector<Observation>, 2> groups_;
  // Sorted entry and exit times per group, for O(log n) risk-set queries.
  std::array<std::vector<double>, 2> sorted_entries_;
  std::array<std::vector<double>, 2> sorted_exits_;
  std::array<std::size_t, 2> event_counts_{};
  std::vector<double> event_times_;
  std::vector<TiedTime> ties_;
};

// Checks every record and assembles the derived structures. Throws
// ValidationError on: empty input, an empty group, status outside
// {0,1,2}, group outside {1,2}, non-finite or negative times, or
// entry >= exit (such a subject could never have been observed).
TwoSampleData validate(std::span<const Observation> records);

// Number of group-g subjects at risk just before t:
// #{i : entry_i < t <= exit_i}.
std::size_t at_risk(const TwoSampleData& data, int g, double t);

// Cause-specific counting process N_k of group g as a step function:
// number of observed cause-k events in [0, t]. cause is 1 or 2.
StepFunction counting_process(const TwoSampleData& data, int g, int cause);

}  // namespace ciftest
