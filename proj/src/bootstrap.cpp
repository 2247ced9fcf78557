#include "ciftest/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ciftest/errors.hpp"
#include "ciftest/estimators.hpp"
#include "ciftest/rng.hpp"

namespace ciftest {

namespace {

constexpr std::uint64_t seed_tag_bootstrap = 0xB0;

std::uint64_t replicate_stream_seed(std::uint64_t seed, MultiplierFamily family,
                                    bool adjusted, std::uint64_t b) {
  const std::uint64_t config =
      static_cast<std::uint64_t>(family) + (adjusted ? 4u : 0u);
  return derive_seed(derive_seed(seed, seed_tag_bootstrap + config), b);
}

void check_ascending(std::span<const double> times, const char* what) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) ||
        (i > 0 && !(times[i - 1] < times[i]))) {
      throw ValidationError(std::string(what) +
                            ": evaluation times must be finite and strictly increasing");
    }
  }
}

std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

// Everything about one group the replicate loop needs, precomputed once.
struct PreparedGroup {
  GroupEventTable table;
  std::size_t subjects = 0;
  std::size_t events = 0;  // observed events, any time

  // Standard process, one slot per observed event in time order:
  // event_base = (S2(u) dN1 + F1(u) dN2)/Y(u), event_recip = 1/Y(u).
  std::vector<double> event_times;
  std::vector<double> event_base;
  std::vector<double> event_recip;

  // Adjusted process, one slot per event-table row:
  std::vector<double> inv_one_minus_da;  // 1/(1 - dA)
  std::vector<double> diag_coef;         // sqrt(1 - dA)/Y
  std::vector<double> cross_coef_c1;     // sqrt(dA_2)/Y, applied to cause-1 events
  std::vector<double> cross_coef_c2;     // sqrt(dA_1)/Y, applied to cause-2 events
  // Observation-index range [row_obs_begin, row_obs_end) sharing the
  // row's exit time, in the group's sorted observation order.
  std::vector<std::size_t> row_obs_begin;
  std::vector<std::size_t> row_obs_end;
  std::vector<int> obs_status;

  // Per evaluation-grid point: number of events / table rows with time
  // <= grid point, and the cause-1 Aalen-Johansen value there.
  std::vector<std::size_t> grid_event_prefix;
  std::vector<std::size_t> grid_row_prefix;
  std::vector<double> f1_on_grid;
};

struct PreparedBootstrap {
  double sqrt_n = 0.0;
  double sqrt_n_half = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Window window;
  std::vector<double> grid;           // t1, pooled event times in (t1,t2), t2
  std::vector<double> observed_diff;  // sqrt(n) * (F1_g1 - F1_g2) on grid
  PreparedGroup group[2];
};

std::vector<double> values_on_grid(std::span<const double> times,
                                   std::span<const double> values, double initial,
                                   std::span<const double> grid) {
  std::vector<double> out(grid.size());
  std::size_t j = 0;
  double current = initial;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (j < times.size() && times[j] <= grid[i]) {
      current = values[j];
      ++j;
    }
    out[i] = current;
  }
  return out;
}

std::vector<std::size_t> prefix_counts(std::span<const double> times,
                                       std::span<const double> grid) {
  std::vector<std::size_t> out(grid.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (j < times.size() && times[j] <= grid[i]) ++j;
    out[i] = j;
  }
  return out;
}

PreparedGroup prepare_group(const TwoSampleData& data, int g,
                            std::span<const double> grid, bool need_adjusted,
                            double window_end) {
  PreparedGroup prep;
  prep.table = build_event_table(data, g);
  prep.subjects = data.group_size(g);
  prep.events = data.event_count(g);

  const auto& obs = data.group(g);
  const GroupEventTable& table = prep.table;

  prep.event_times.reserve(prep.events);
  prep.event_base.reserve(prep.events);
  prep.event_recip.reserve(prep.events);
  std::size_t row = 0;
  for (const Observation& o : obs) {
    if (o.status == 0) continue;
    while (table.times[row] < o.exit) ++row;
    const double y = table.at_risk[row];
    const double s2 = 1.0 - table.cif2[row];
    const double f1 = table.cif1[row];
    prep.event_times.push_back(o.exit);
    prep.event_base.push_back((o.status == 1 ? s2 : f1) / y);
    prep.event_recip.push_back(1.0 / y);
  }

  if (need_adjusted) {
    const std::size_t rows = table.rows();
    prep.inv_one_minus_da.resize(rows);
    prep.diag_coef.resize(rows);
    prep.cross_coef_c1.resize(rows);
    prep.cross_coef_c2.resize(rows);
    prep.row_obs_begin.resize(rows);
    prep.row_obs_end.resize(rows);
    prep.obs_status.reserve(obs.size());
    for (const Observation& o : obs) prep.obs_status.push_back(o.status);

    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double t = table.times[r];
      while (i < obs.size() && obs[i].exit < t) ++i;
      prep.row_obs_begin[r] = i;
      while (i < obs.size() && obs[i].exit == t) ++i;
      prep.row_obs_end[r] = i;

      const int d = table.cause1[r] + table.cause2[r];
      const double y = table.at_risk[r];
      const double da = static_cast<double>(d) / y;
      if (t <= window_end && d == static_cast<int>(y)) {
        throw NumericError(
            "adjusted bootstrap: all-cause hazard increment equals 1 at time " +
            format_time(t) + " in group " + std::to_string(g) +
            " (risk set exhausted at a jump); shrink the window");
      }
      prep.inv_one_minus_da[r] = 1.0 / (1.0 - da);
      prep.diag_coef[r] = std::sqrt(1.0 - da) / y;
      prep.cross_coef_c1[r] =
          std::sqrt(static_cast<double>(table.cause2[r]) / y) / y;
      prep.cross_coef_c2[r] =
          std::sqrt(static_cast<double>(table.cause1[r]) / y) / y;
    }
  }

  prep.grid_event_prefix = prefix_counts(prep.event_times, grid);
  prep.grid_row_prefix = prefix_counts(table.times, grid);
  prep.f1_on_grid = values_on_grid(table.times, table.cif1, 0.0, grid);
  return prep;
}

PreparedBootstrap prepare_bootstrap(const TwoSampleData& data, const Window& w,
                                    bool need_adjusted) {
  validate_window(w);
  PreparedBootstrap prep;
  prep.n1 = data.group_size(1);
  prep.n2 = data.group_size(2);
  const double n = static_cast<double>(prep.n1 + prep.n2);
  prep.sqrt_n = std::sqrt(n);
  prep.sqrt_n_half = std::sqrt(n / 2.0);
  prep.window = w;

  prep.grid.push_back(w.t1);
  for (double t : data.event_times()) {
    if (t > w.t1 && t < w.t2) prep.grid.push_back(t);
  }
  prep.grid.push_back(w.t2);

  prep.group[0] = prepare_group(data, 1, prep.grid, need_adjusted, w.t2);
  prep.group[1] = prepare_group(data, 2, prep.grid, need_adjusted, w.t2);

  prep.observed_diff.resize(prep.grid.size());
  for (std::size_t j = 0; j < prep.grid.size(); ++j) {
    prep.observed_diff[j] =
        prep.sqrt_n * (prep.group[0].f1_on_grid[j] - prep.group[1].f1_on_grid[j]);
  }
  return prep;
}

// V*(grid) for one group with given per-event multipliers, accumulated
// into curve with the given sign. Uses the decomposition
// V*(t) = sqrt(n) * [A(t) - F1(t) B(t)] with cumulative sums A, B over
// events up to t.
void add_standard_curve(const PreparedBootstrap& prep, int gi,
                        std::span<const double> w, double sign,
                        std::vector<double>& curve) {
  const PreparedGroup& g = prep.group[gi];
  double a = 0.0;
  double b = 0.0;
  std::size_t e = 0;
  for (std::size_t j = 0; j < prep.grid.size(); ++j) {
    const std::size_t upto = g.grid_event_prefix[j];
    for (; e < upto; ++e) {
      a += w[e] * g.event_base[e];
      b += w[e] * g.event_recip[e];
    }
    curve[j] += sign * prep.sqrt_n * (a - g.f1_on_grid[j] * b);
  }
}

// Same for the tie-adjusted process with per-subject multiplier rows.
void add_adjusted_curve(const PreparedBootstrap& prep, int gi,
                        std::span<const SubjectMultipliers> gm, double sign,
                        std::vector<double>& curve) {
  const PreparedGroup& g = prep.group[gi];
  const GroupEventTable& table = g.table;
  double a = 0.0;
  double b = 0.0;
  std::size_t r = 0;
  for (std::size_t j = 0; j < prep.grid.size(); ++j) {
    const std::size_t upto = g.grid_row_prefix[j];
    for (; r < upto; ++r) {
      double s11 = 0.0, s12 = 0.0, s21 = 0.0, s22 = 0.0;
      for (std::size_t i = g.row_obs_begin[r]; i < g.row_obs_end[r]; ++i) {
        if (g.obs_status[i] == 1) {
          s11 += gm[i][0];
          s21 += gm[i][2];
        } else if (g.obs_status[i] == 2) {
          s22 += gm[i][3];
          s12 += gm[i][1];
        }
      }
      // The cross-cause term enters both auxiliary processes with the
      // same draws and opposite signs; the induced negative covariance
      // is what reproduces the tie part of the limiting covariance.
      const double cross = prep.sqrt_n_half * (g.cross_coef_c1[r] * s21 +
                                               g.cross_coef_c2[r] * s12);
      const double dw1 = prep.sqrt_n * g.diag_coef[r] * s11 + cross;
      const double dw2 = prep.sqrt_n * g.diag_coef[r] * s22 - cross;
      const double s2 = 1.0 - table.cif2[r];
      a += (s2 * dw1 + table.cif1[r] * dw2) * g.inv_one_minus_da[r];
      b += (dw1 + dw2) * g.inv_one_minus_da[r];
    }
    curve[j] += sign * (a - g.f1_on_grid[j] * b);
  }
}

// Per-replicate working buffers, reused across replicates of a thread.
struct Workspace {
  std::vector<double> w1, w2, diff;
  std::vector<SubjectMultipliers> g1, g2;
};

void compute_difference_curve(const PreparedBootstrap& prep,
                              MultiplierFamily family, bool adjusted,
                              Xoshiro256pp& rng, Workspace& ws) {
  ws.diff.assign(prep.grid.size(), 0.0);
  if (!adjusted) {
    ws.w1.resize(prep.group[0].events);
    ws.w2.resize(prep.group[1].events);
    for (double& w : ws.w1) w = draw_multiplier(family, rng);
    for (double& w : ws.w2) w = draw_multiplier(family, rng);
    add_standard_curve(prep, 0, ws.w1, 1.0, ws.diff);
    add_standard_curve(prep, 1, ws.w2, -1.0, ws.diff);
  } else {
    ws.g1.resize(prep.group[0].subjects);
    ws.g2.resize(prep.group[1].subjects);
    for (auto& row : ws.g1)
      for (double& w : row) w = draw_multiplier(family, rng);
    for (auto& row : ws.g2)
      for (double& w : row) w = draw_multiplier(family, rng);
    add_adjusted_curve(prep, 0, ws.g1, 1.0, ws.diff);
    add_adjusted_curve(prep, 1, ws.g2, -1.0, ws.diff);
  }
}

void for_each_replicate(int B, int threads, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (threads == 1) {
    // Serial reference loop, kept as the comparison baseline.
    for (int b = 0; b < B; ++b) body(b);
  } else if (threads <= 0) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < B; ++b) body(b);
  } else {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int b = 0; b < B; ++b) body(b);
  }
#else
  (void)threads;
  for (int b = 0; b < B; ++b) body(b);
#endif
}

// Bootstrap replicates of the requested functionals for one
// (family, adjusted) configuration. out[k][b] holds the uncorrected
// replicate b of functional kinds[k].
void replicate_batch(const PreparedBootstrap& prep, MultiplierFamily family,
                     bool adjusted, int B, std::uint64_t seed, int threads,
                     std::span<const StatKind> kinds,
                     std::vector<std::vector<double>>& out) {
  out.assign(kinds.size(), std::vector<double>(static_cast<std::size_t>(B)));
  for_each_replicate(B, threads, [&](int b) {
    thread_local Workspace ws;
    Xoshiro256pp rng(replicate_stream_seed(seed, family, adjusted,
                                           static_cast<std::uint64_t>(b)));
    compute_difference_curve(prep, family, adjusted, rng, ws);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      out[k][static_cast<std::size_t>(b)] =
          step_functional(kinds[k], prep.grid, ws.diff);
    }
  });
}

struct Calibration {
  StatisticValue statistic;
  double raw_value = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  bool reject = false;
};

double empirical_quantile(std::vector<double> sorted, double level) {
  std::sort(sorted.begin(), sorted.end());
  const auto B = sorted.size();
  auto idx = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(B)));
  idx = std::min(std::max<std::size_t>(idx, 1), B);
  return sorted[idx - 1];
}

ReplicateSummary summarize_replicates(std::span<const double> reps, double alpha) {
  ReplicateSummary s;
  s.count = reps.size();
  s.mean = sample_mean(reps);
  s.sd = reps.size() > 1 ? sample_sd(reps) : 0.0;
  s.min = *std::min_element(reps.begin(), reps.end());
  s.max = *std::max_element(reps.begin(), reps.end());
  s.quantile_level = 1.0 - alpha;
  s.quantile = empirical_quantile({reps.begin(), reps.end()}, s.quantile_level);
  return s;
}

Calibration calibrate(StatKind kind, double observed_raw,
                      std::span<const double> reps, double alpha, const Window& w,
                      std::size_t n1, std::size_t n2) {
  Calibration cal;
  switch (kind) {
    case StatKind::abc:
    case StatKind::ks:
    case StatKind::cvm: {
      cal.statistic = {kind, observed_raw, w, n1, n2};
      cal.raw_value = observed_raw;
      cal.critical_value = empirical_quantile({reps.begin(), reps.end()}, 1.0 - alpha);
      cal.reject = observed_raw > cal.critical_value;
      std::size_t ge = 0;
      for (double r : reps) {
        if (r >= observed_raw) ++ge;
      }
      cal.p_value = (1.0 + static_cast<double>(ge)) /
                    (static_cast<double>(reps.size()) + 1.0);
      break;
    }
    case StatKind::pepe: {
      const double sd = sample_sd(reps);
      if (!(sd > 0.0)) {
        throw NumericError("pepe studentization: bootstrap variance is zero");
      }
      const double z = std::fabs(observed_raw) / sd;
      cal.statistic = {StatKind::pepe, z, w, n1, n2};
      cal.raw_value = observed_raw;
      cal.critical_value = standard_normal_quantile(1.0 - alpha / 2.0);
      cal.reject = z > cal.critical_value;
      cal.p_value = 2.0 * (1.0 - standard_normal_cdf(z));
      break;
    }
    case StatKind::zabc: {
      cal.statistic = zabc_statistic(observed_raw, reps, w, n1, n2);
      cal.raw_value = observed_raw;
      cal.critical_value = standard_normal_quantile(1.0 - alpha);
      cal.reject = cal.statistic.value > cal.critical_value;
      cal.p_value = 1.0 - standard_normal_cdf(cal.statistic.value);
      break;
    }
  }
  return cal;
}

// The functional whose replicates calibrate a given test kind.
StatKind functional_for(StatKind kind) {
  return kind == StatKind::zabc ? StatKind::abc : kind;
}

void check_replicate_count(int B) {
  if (B < 1) throw ValidationError("bootstrap: B must be at least 1");
}

void check_run_args(int B, double alpha) {
  check_replicate_count(B);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("bootstrap: alpha must lie in (0, 1)");
  }
}

}  // namespace

double replicate_correction(StatKind functional_kind, std::size_t n1,
                            std::size_t n2) {
  const double factor = correction_factor(n1, n2);
  return functional_kind == StatKind::cvm ? factor * factor : factor;
}

StepFunction wb_process(const TwoSampleData& data, int g,
                        std::span<const double> multipliers,
                        std::span<const double> eval_times) {
  check_ascending(eval_times, "wild bootstrap process");
  if (multipliers.size() != data.event_count(g)) {
    throw ValidationError(
        "wild bootstrap process: need one multiplier per observed event (" +
        std::to_string(data.event_count(g)) + "), got " +
        std::to_string(multipliers.size()));
  }
  const GroupEventTable table = build_event_table(data, g);
  const double sqrt_n = std::sqrt(static_cast<double>(data.total_size()));

  // Per-event coefficients, in event-time order.
  std::vector<double> etimes, base, recip;
  std::size_t row = 0;
  for (const Observation& o : data.group(g)) {
    if (o.status == 0) continue;
    while (table.times[row] < o.exit) ++row;
    const double y = table.at_risk[row];
    etimes.push_back(o.exit);
    base.push_back(((o.status == 1 ? 1.0 - table.cif2[row] : table.cif1[row])) / y);
    recip.push_back(1.0 / y);
  }

  std::vector<double> values(eval_times.size());
  double a = 0.0;
  double b = 0.0;
  std::size_t e = 0;
  std::size_t trow = 0;
  double f1 = 0.0;
  for (std::size_t j = 0; j < eval_times.size(); ++j) {
    while (e < etimes.size() && etimes[e] <= eval_times[j]) {
      a += multipliers[e] * base[e];
      b += multipliers[e] * recip[e];
      ++e;
    }
    while (trow < table.rows() && table.times[trow] <= eval_times[j]) {
      f1 = table.cif1[trow];
      ++trow;
    }
    values[j] = sqrt_n * (a - f1 * b);
  }
  const double initial = values.empty() ? 0.0 : values.front();
  return StepFunction(initial, {eval_times.begin(), eval_times.end()},
                      std::move(values));
}

StepFunction wb_adjusted_process(const TwoSampleData& data, int g,
                                 std::span<const SubjectMultipliers> multipliers,
                                 std::span<const double> eval_times) {
  check_ascending(eval_times, "adjusted wild bootstrap process");
  if (multipliers.size() != data.group_size(g)) {
    throw ValidationError(
        "adjusted wild bootstrap process: need one multiplier row per subject (" +
        std::to_string(data.group_size(g)) + "), got " +
        std::to_string(multipliers.size()));
  }
  const GroupEventTable table = build_event_table(data, g);
  const auto& obs = data.group(g);
  const double n = static_cast<double>(data.total_size());
  const double sqrt_n = std::sqrt(n);
  const double sqrt_n_half = std::sqrt(n / 2.0);
  const double horizon = eval_times.empty()
                             ? -1.0
                             : eval_times.back();

  std::vector<double> values(eval_times.size());
  double a = 0.0;
  double b = 0.0;
  std::size_t r = 0;
  std::size_t i = 0;
  for (std::size_t j = 0; j < eval_times.size(); ++j) {
    while (r < table.rows() && table.times[r] <= eval_times[j]) {
      const double t = table.times[r];
      const int d = table.cause1[r] + table.cause2[r];
      const double y = table.at_risk[r];
      if (t <= horizon && d == static_cast<int>(y)) {
        throw NumericError(
            "adjusted bootstrap: all-cause hazard increment equals 1 at time " +
            format_time(t) + " in group " + std::to_string(g) +
            " (risk set exhausted at a jump); shrink the window");
      }
      const double da = static_cast<double>(d) / y;
      const double inv = 1.0 / (1.0 - da);
      const double diag = std::sqrt(1.0 - da) / y;
      const double cross_c1 = std::sqrt(static_cast<double>(table.cause2[r]) / y) / y;
      const double cross_c2 = std::sqrt(static_cast<double>(table.cause1[r]) / y) / y;

      while (i < obs.size() && obs[i].exit < t) ++i;
      double s11 = 0.0, s12 = 0.0, s21 = 0.0, s22 = 0.0;
      while (i < obs.size() && obs[i].exit == t) {
        if (obs[i].status == 1) {
          s11 += multipliers[i][0];
          s21 += multipliers[i][2];
        } else if (obs[i].status == 2) {
          s22 += multipliers[i][3];
          s12 += multipliers[i][1];
        }
        ++i;
      }
      const double cross = sqrt_n_half * (cross_c1 * s21 + cross_c2 * s12);
      const double dw1 = sqrt_n * diag * s11 + cross;
      const double dw2 = sqrt_n * diag * s22 - cross;
      a += ((1.0 - table.cif2[r]) * dw1 + table.cif1[r] * dw2) * inv;
      b += (dw1 + dw2) * inv;
      ++r;
    }
    // F1 at the evaluation time (right-continuous).
    double f1 = r == 0 ? 0.0 : table.cif1[r - 1];
    values[j] = a - f1 * b;
  }
  const double initial = values.empty() ? 0.0 : values.front();
  return StepFunction(initial, {eval_times.begin(), eval_times.end()},
                      std::move(values));
}

double wb_statistic(const StepFunction& v1, const StepFunction& v2, StatKind kind,
                    const Window& w) {
  const auto t1 = v1.jump_times();
  const auto t2 = v2.jump_times();
  if (!std::equal(t1.begin(), t1.end(), t2.begin(), t2.end())) {
    throw ValidationError("resampling statistic: processes evaluated on different grids");
  }
  const auto grid = merged_grid(v1, v2, w);
  std::vector<double> diff(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) diff[j] = v1(grid[j]) - v2(grid[j]);
  return step_functional(functional_for(kind), grid, diff);
}

std::string test_name(const TestSpec& spec) {
  std::string name = to_string(spec.kind) + ":" + to_string(spec.multiplier.family);
  if (spec.multiplier.corrected) name += ":corrected";
  if (spec.adjusted) name += ":adjusted";
  return name;
}

TestSpec parse_test_spec(const std::string& token) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= token.size()) {
    const std::size_t colon = token.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(token.substr(start));
      break;
    }
    parts.push_back(token.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.empty() || parts[0].empty()) {
    throw ConfigError("empty test name; expected kind[:family][:corrected][:adjusted]");
  }
  TestSpec spec;
  spec.kind = stat_kind_from_string(parts[0]);
  bool family_seen = false;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p == "corrected") {
      spec.multiplier.corrected = true;
    } else if (p == "adjusted") {
      spec.adjusted = true;
    } else if (!family_seen) {
      spec.multiplier.family = multiplier_family_from_string(p);
      family_seen = true;
    } else {
      throw ConfigError("unknown test option '" + p + "' in '" + token +
                        "'; expected a multiplier family (normal, poisson, "
                        "rademacher), 'corrected', or 'adjusted'");
    }
  }
  return spec;
}

std::vector<double> bootstrap_replicates(const TwoSampleData& data, const Window& w,
                                         StatKind functional_kind,
                                         const MultiplierSpec& spec, bool adjusted,
                                         int B, std::uint64_t seed, int threads) {
  check_replicate_count(B);
  if (functional_kind == StatKind::zabc) functional_kind = StatKind::abc;
  const PreparedBootstrap prep = prepare_bootstrap(data, w, adjusted);
  std::vector<std::vector<double>> out;
  const StatKind kinds[] = {functional_kind};
  replicate_batch(prep, spec.family, adjusted, B, seed, threads, kinds, out);
  if (spec.corrected) {
    const double corr = replicate_correction(functional_kind, prep.n1, prep.n2);
    for (double& v : out[0]) v *= corr;
  }
  return std::move(out[0]);
}

TestResult run_test(const TwoSampleData& data, const Window& w, StatKind kind,
                    const MultiplierSpec& spec, int B, double alpha,
                    std::uint64_t seed, bool adjusted, int threads) {
  const TestSpec ts{kind, spec, adjusted};
  return run_tests(data, w, std::span<const TestSpec>(&ts, 1), B, alpha, seed,
                   threads)[0];
}

std::vector<TestResult> run_tests(const TwoSampleData& data, const Window& w,
                                  std::span<const TestSpec> roster, int B,
                                  double alpha, std::uint64_t seed, int threads) {
  check_run_args(B, alpha);
  if (roster.empty()) {
    throw ValidationError("empty test roster");
  }
  bool any_adjusted = false;
  for (const TestSpec& spec : roster) any_adjusted |= spec.adjusted;
  const PreparedBootstrap prep = prepare_bootstrap(data, w, any_adjusted);

  std::vector<std::string> shared_warnings;
  for (int g = 1; g <= 2; ++g) {
    if (w.t2 > data.last_exit(g)) {
      shared_warnings.push_back("group " + std::to_string(g) +
                                " has no subject at risk beyond time " +
                                format_time(data.last_exit(g)) +
                                ", inside the window");
    }
  }
  std::string tie_warning;
  if (data.has_ties()) {
    tie_warning = "tied event times present (" +
                  std::to_string(data.ties().size()) +
                  " distinct times); the unadjusted bootstrap assumes "
                  "tie-free event times";
  }

  // Observed statistics per functional, from the same grid the
  // replicates use.
  double observed[4];
  observed[static_cast<int>(StatKind::abc)] =
      step_functional(StatKind::abc, prep.grid, prep.observed_diff);
  observed[static_cast<int>(StatKind::ks)] =
      step_functional(StatKind::ks, prep.grid, prep.observed_diff);
  observed[static_cast<int>(StatKind::cvm)] =
      step_functional(StatKind::cvm, prep.grid, prep.observed_diff);
  observed[static_cast<int>(StatKind::pepe)] =
      step_functional(StatKind::pepe, prep.grid, prep.observed_diff);

  std::vector<TestResult> results(roster.size());

  // Group roster entries sharing multiplier draws: same family, same
  // adjustment.
  struct BatchKey {
    MultiplierFamily family;
    bool adjusted;
    bool operator==(const BatchKey&) const = default;
  };
  std::vector<BatchKey> keys;
  for (const TestSpec& spec : roster) {
    const BatchKey key{spec.multiplier.family, spec.adjusted};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }

  for (const BatchKey& key : keys) {
    std::vector<StatKind> kinds;
    for (const TestSpec& spec : roster) {
      if (spec.multiplier.family != key.family || spec.adjusted != key.adjusted) {
        continue;
      }
      const StatKind fk = functional_for(spec.kind);
      if (std::find(kinds.begin(), kinds.end(), fk) == kinds.end()) {
        kinds.push_back(fk);
      }
    }
    std::vector<std::vector<double>> reps;
    replicate_batch(prep, key.family, key.adjusted, B, seed, threads, kinds, reps);

    for (std::size_t e = 0; e < roster.size(); ++e) {
      const TestSpec& spec = roster[e];
      if (spec.multiplier.family != key.family || spec.adjusted != key.adjusted) {
        continue;
      }
      const StatKind fk = functional_for(spec.kind);
      const std::size_t k = static_cast<std::size_t>(
          std::find(kinds.begin(), kinds.end(), fk) - kinds.begin());
      std::vector<double> entry_reps = reps[k];
      if (spec.multiplier.corrected) {
        const double corr = replicate_correction(fk, prep.n1, prep.n2);
        for (double& v : entry_reps) v *= corr;
      }
      const double observed_raw =
          observed[static_cast<int>(functional_for(spec.kind))];
      Calibration cal =
          calibrate(spec.kind, observed_raw, entry_reps, alpha, w, prep.n1, prep.n2);

      TestResult& res = results[e];
      res.statistic = cal.statistic;
      res.raw_value = cal.raw_value;
      res.p_value = cal.p_value;
      res.critical_value = cal.critical_value;
      res.reject = cal.reject;
      res.B = B;
      res.seed = seed;
      res.multiplier = spec.multiplier;
      res.adjusted = spec.adjusted;
      res.alpha = alpha;
      res.replicates = summarize_replicates(entry_reps, alpha);
      res.warnings = shared_warnings;
      if (!spec.adjusted && !tie_warning.empty()) {
        res.warnings.push_back(tie_warning);
      }
    }
  }
  return results;
}

}  // namespace ciftest
