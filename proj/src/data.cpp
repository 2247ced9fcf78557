#include "ciftest/data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ciftest/errors.hpp"

namespace ciftest {

namespace {

int group_index(int g) {
  if (g != 1 && g != 2) {
    throw ValidationError("unknown group " + std::to_string(g) + "; expected 1 or 2");
  }
  return g - 1;
}

}  // namespace

const std::vector<Observation>& TwoSampleData::group(int g) const {
  return groups_[static_cast<std::size_t>(group_index(g))];
}

std::size_t TwoSampleData::total_size() const {
  return groups_[0].size() + groups_[1].size();
}

std::size_t TwoSampleData::event_count(int g) const {
  return event_counts_[static_cast<std::size_t>(group_index(g))];
}

double TwoSampleData::last_exit(int g) const {
  const auto& exits = sorted_exits_[static_cast<std::size_t>(group_index(g))];
  return exits.back();
}

TwoSampleData validate(std::span<const Observation> records) {
  if (records.empty()) {
    throw ValidationError("no observations given");
  }

  TwoSampleData data;
  std::size_t row = 0;
  for (const Observation& obs : records) {
    ++row;
    const std::string where = "record " + std::to_string(row) + ": ";
    if (!std::isfinite(obs.entry) || !std::isfinite(obs.exit)) {
      throw ValidationError(where + "non-finite time");
    }
    if (obs.entry < 0.0 || obs.exit < 0.0) {
      throw ValidationError(where + "negative time");
    }
    if (!(obs.entry < obs.exit)) {
      throw ValidationError(where + "entry time must be strictly before exit time");
    }
    if (obs.status < 0 || obs.status > 2) {
      throw ValidationError(where + "status must be 0 (censored), 1 or 2 (event cause)");
    }
    if (obs.group != 1 && obs.group != 2) {
      throw ValidationError(where + "group must be 1 or 2");
    }
    data.groups_[static_cast<std::size_t>(obs.group - 1)].push_back(obs);
  }

  for (int g = 0; g < 2; ++g) {
    auto& obs = data.groups_[static_cast<std::size_t>(g)];
    if (obs.empty()) {
      throw ValidationError("group " + std::to_string(g + 1) + " is empty");
    }
    std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
      if (a.exit != b.exit) return a.exit < b.exit;
      if (a.status != b.status) return a.status < b.status;
      return a.entry < b.entry;
    });
    auto& entries = data.sorted_entries_[static_cast<std::size_t>(g)];
    auto& exits = data.sorted_exits_[static_cast<std::size_t>(g)];
    entries.reserve(obs.size());
    exits.reserve(obs.size());
    for (const Observation& o : obs) {
      entries.push_back(o.entry);
      exits.push_back(o.exit);
      if (o.status != 0) {
        ++data.event_counts_[static_cast<std::size_t>(g)];
        data.event_times_.push_back(o.exit);
      }
    }
    std::sort(entries.begin(), entries.end());
  }

  // Pooled event times: collapse duplicates, recording multiplicities.
  std::sort(data.event_times_.begin(), data.event_times_.end());
  std::vector<double> distinct;
  distinct.reserve(data.event_times_.size());
  std::size_t i = 0;
  while (i < data.event_times_.size()) {
    std::size_t j = i;
    while (j < data.event_times_.size() && data.event_times_[j] == data.event_times_[i]) {
      ++j;
    }
    distinct.push_back(data.event_times_[i]);
    if (j - i >= 2) {
      data.ties_.push_back({data.event_times_[i], static_cast<int>(j - i)});
    }
    i = j;
  }
  data.event_times_ = std::move(distinct);

  return data;
}

std::size_t TwoSampleData::risk_set_size(int g, double t) const {
  const auto idx = static_cast<std::size_t>(group_index(g));
  const auto& entries = sorted_entries_[idx];
  const auto& exits = sorted_exits_[idx];
  // Entered strictly before t, not yet exited before t. Since
  // entry < exit always, every exit < t has a matching entry < t, so the
  // difference of the two counts is the risk-set size.
  const auto entered =
      std::lower_bound(entries.begin(), entries.end(), t) - entries.begin();
  const auto exited = std::lower_bound(exits.begin(), exits.end(), t) - exits.begin();
  return static_cast<std::size_t>(entered - exited);
}

std::size_t at_risk(const TwoSampleData& data, int g, double t) {
  return data.risk_set_size(g, t);
}

StepFunction counting_process(const TwoSampleData& data, int g, int cause) {
  if (cause != 1 && cause != 2) {
    throw ValidationError("unknown cause " + std::to_string(cause) + "; expected 1 or 2");
  }
  const auto& obs = data.group(g);
  std::vector<double> times;
  std::vector<double> counts;
  double running = 0.0;
  std::size_t i = 0;
  while (i < obs.size()) {
    // Observations are sorted by exit time; accumulate cause events per
    // distinct time.
    const double t = obs[i].exit;
    int events_here = 0;
    while (i < obs.size() && obs[i].exit == t) {
      if (obs[i].status == cause) ++events_here;
      ++i;
    }
    if (events_here > 0) {
      running += events_here;
      times.push_back(t);
      counts.push_back(running);
    }
  }
  return StepFunction(0.0, std::move(times), std::move(counts));
}

}  // namespace ciftest
