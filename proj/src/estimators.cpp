#include "ciftest/estimators.hpp"

#include <string>

#include "ciftest/errors.hpp"

namespace ciftest {

GroupEventTable build_event_table(const TwoSampleData& data, int g) {
  const auto& obs = data.group(g);
  GroupEventTable table;
  table.support_end = data.last_exit(g);

  std::size_t i = 0;
  double km = 1.0;
  double cif1 = 0.0;
  double cif2 = 0.0;
  while (i < obs.size()) {
    const double t = obs[i].exit;
    int d1 = 0;
    int d2 = 0;
    while (i < obs.size() && obs[i].exit == t) {
      if (obs[i].status == 1) ++d1;
      if (obs[i].status == 2) ++d2;
      ++i;
    }
    if (d1 + d2 == 0) continue;  // censoring-only time

    const double y = static_cast<double>(data.risk_set_size(g, t));
    const double km_before = km;
    // Tied events across causes share the same left limit and risk set.
    cif1 += km_before * static_cast<double>(d1) / y;
    cif2 += km_before * static_cast<double>(d2) / y;
    km *= 1.0 - static_cast<double>(d1 + d2) / y;

    table.times.push_back(t);
    table.cause1.push_back(d1);
    table.cause2.push_back(d2);
    table.at_risk.push_back(y);
    table.km_before.push_back(km_before);
    table.km.push_back(km);
    table.cif1.push_back(cif1);
    table.cif2.push_back(cif2);
  }
  return table;
}

EstimatorOutput kaplan_meier(const TwoSampleData& data, int g) {
  const GroupEventTable table = build_event_table(data, g);
  return {StepFunction(1.0, table.times, table.km), g, std::nullopt,
          table.support_end};
}

EstimatorOutput nelson_aalen(const TwoSampleData& data, int g,
                             std::optional<int> cause) {
  if (cause && *cause != 1 && *cause != 2) {
    throw ValidationError("unknown cause " + std::to_string(*cause) +
                          "; expected 1 or 2");
  }
  const GroupEventTable table = build_event_table(data, g);
  std::vector<double> times;
  std::vector<double> values;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    int d = table.cause1[i] + table.cause2[i];
    if (cause) d = (*cause == 1) ? table.cause1[i] : table.cause2[i];
    if (d == 0) continue;
    cumulative += static_cast<double>(d) / table.at_risk[i];
    times.push_back(table.times[i]);
    values.push_back(cumulative);
  }
  return {StepFunction(0.0, std::move(times), std::move(values)), g, cause,
          table.support_end};
}

EstimatorOutput aalen_johansen(const TwoSampleData& data, int g, int cause) {
  if (cause != 1 && cause != 2) {
    throw ValidationError("unknown cause " + std::to_string(cause) +
                          "; expected 1 or 2");
  }
  const GroupEventTable table = build_event_table(data, g);
  const auto& cif = (cause == 1) ? table.cif1 : table.cif2;
  const auto& d = (cause == 1) ? table.cause1 : table.cause2;
  std::vector<double> times;
  std::vector<double> values;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (d[i] == 0) continue;  // no cause-k jump here
    times.push_back(table.times[i]);
    values.push_back(cif[i]);
  }
  return {StepFunction(0.0, std::move(times), std::move(values)), g, cause,
          table.support_end};
}

}  // namespace ciftest
