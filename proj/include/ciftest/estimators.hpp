#pragma once

#include <optional>
#include <vector>

#include "ciftest/data.hpp"
#include "ciftest/step_function.hpp"

namespace ciftest {

// Per-group event table: one row per distinct observed event time of the
// group, with everything the estimators and the bootstrap engine need at
// that time. All estimator functions below are thin views over this.
struct GroupEventTable {
  std::vector<double> times;      // distinct event times, ascending
  std::vector<int> cause1;        // cause-1 events at times[i]
  std::vector<int> cause2;        // cause-2 events at times[i]
  std::vector<double> at_risk;    // Y just before times[i]
  std::vector<double> km_before;  // Kaplan-Meier left limit K(t-)
  std::vector<double> km;         // Kaplan-Meier K(t)
  std::vector<double> cif1;       // Aalen-Johansen F_1(t)
  std::vector<double> cif2;       // Aalen-Johansen F_2(t)
  double support_end = 0.0;       // largest exit time in the group

  std::size_t rows() const { return times.size(); }
};

GroupEventTable build_event_table(const TwoSampleData& data, int g);

// Estimate plus the identifiers needed to interpret it.
struct EstimatorOutput {
  StepFunction estimate;
  int group = 1;
  std::optional<int> cause;  // empty for all-cause quantities
  double support_end = 0.0;  // beyond it the estimate is held constant
};

// Kaplan-Meier estimator of the overall survival function of group g:
// product over event times s <= u of (1 - dN(s)/Y(s)).
EstimatorOutput kaplan_meier(const TwoSampleData& data, int g);

// Nelson-Aalen estimator of the cumulative hazard. cause 1 or 2 selects
// the cause-specific hazard; an empty cause gives the all-cause one.
EstimatorOutput nelson_aalen(const TwoSampleData& data, int g,
                             std::optional<int> cause);

// Aalen-Johansen estimator of the cumulative incidence function of the
// given cause: sum over event times s <= t of K(s-) dN_k(s)/Y(s).
EstimatorOutput aalen_johansen(const TwoSampleData& data, int g, int cause);

}  // namespace ciftest
