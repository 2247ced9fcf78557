#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ciftest/bootstrap.hpp"
#include "ciftest/errors.hpp"
#include "ciftest/estimators.hpp"
#include "ciftest/rng.hpp"
#include "ciftest/simulation.hpp"
#include "test_support.hpp"

using namespace ciftest;

namespace {

// Two cause-1 events in group 1, two late censored subjects in group 2:
// total n = 4, so the process scale is sqrt(4) = 2.
TwoSampleData hand_dataset() {
  return validate(std::vector<Observation>{
      {0, 1, 1, 1}, {0, 2, 1, 1}, {0, 5, 0, 2}, {0, 6, 0, 2}});
}

TwoSampleData simulated(std::size_t n1, std::size_t n2, std::uint64_t seed,
                        bool censored = false) {
  ScenarioConfig config = make_scenario(2, Hypothesis::h0);
  config.n1 = n1;
  config.n2 = n2;
  if (censored) config.censoring = CensoringSpec::paired(1.0 / 3.0, 1.6);
  config.seed = seed;
  Xoshiro256pp rng(derive_seed(seed, 0x77));
  return simulate_dataset(config, rng);
}

}  // namespace

TEST_CASE("wild bootstrap process hand evaluation") {
  const TwoSampleData data = hand_dataset();
  const std::vector<double> eval{0.5, 1.0, 1.5, 2.0, 3.0};
  const std::vector<double> w{1.0, 1.0};
  const StepFunction v = wb_process(data, 1, w, eval);
  CHECK(v(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v(1.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v(2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v(3.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero multipliers give the zero process") {
  const TwoSampleData data = hand_dataset();
  const std::vector<double> eval{0.5, 1.0, 2.0, 3.0};
  const StepFunction v = wb_process(data, 1, std::vector<double>{0.0, 0.0}, eval);
  for (double t : eval) CHECK(v(t) == 0.0);

  const std::vector<SubjectMultipliers> zero(2, SubjectMultipliers{0, 0, 0, 0});
  const StepFunction va = wb_adjusted_process(data, 2, zero, eval);
  for (double t : eval) CHECK(va(t) == 0.0);
}

TEST_CASE("a group without events has the zero process") {
  const TwoSampleData data = hand_dataset();
  // group 2 has no observed events, so no multipliers are needed
  const std::vector<double> eval{0.5, 2.0, 7.0};
  const StepFunction v = wb_process(data, 2, std::vector<double>{}, eval);
  CHECK(v(0.5) == 0.0);
  CHECK(v(7.0) == 0.0);
}

TEST_CASE("multiplier count mismatches are rejected") {
  const TwoSampleData data = hand_dataset();
  const std::vector<double> eval{1.0};
  CHECK_THROWS_AS(wb_process(data, 1, std::vector<double>{1.0}, eval),
                  ValidationError);
  const std::vector<SubjectMultipliers> one(1, SubjectMultipliers{1, 1, 1, 1});
  CHECK_THROWS_AS(wb_adjusted_process(data, 1, one, eval), ValidationError);
}

TEST_CASE("adjusted process reports a singular adjustment factor") {
  const TwoSampleData data =
      validate(std::vector<Observation>{{0, 1, 1, 1}, {0, 5, 0, 2}});
  const std::vector<SubjectMultipliers> m(1, SubjectMultipliers{1, 1, 1, 1});
  const std::vector<double> full{1.0, 2.0};
  CHECK_THROWS_WITH_AS(wb_adjusted_process(data, 1, m, full),
                       doctest::Contains("time 1"), NumericError);
  // With the window ending before the singular time the process is fine.
  const std::vector<double> early{0.5, 0.9};
  CHECK_NOTHROW(wb_adjusted_process(data, 1, m, early));
}

TEST_CASE("adjusted process vanishes without cause-2 events when its multipliers are zeroed") {
  const TwoSampleData data = hand_dataset();  // group 1 has only cause-1 events
  std::vector<SubjectMultipliers> m(2);
  for (auto& row : m) row = {0.0, 3.7, 0.0, -1.2};  // G11 = G21 = 0
  // Horizon stops before the last event, where the risk set would die.
  const std::vector<double> eval{0.5, 1.0, 1.5};
  const StepFunction v = wb_adjusted_process(data, 1, m, eval);
  for (double t : eval) CHECK(v(t) == 0.0);
}

// On tie-free data both bootstrap processes of a group change value at
// exactly the group's cause-1 event times. A pure cause-2 event at u
// contributes the term (F1(u) - F1(t))/Y, which vanishes at t = u, so
// neither process moves there; the accumulated mass surfaces at the
// next cause-1 jump.
TEST_CASE("standard and adjusted processes share the cause-1 jump structure") {
  const TwoSampleData data = simulated(30, 30, 404);
  REQUIRE_FALSE(data.has_ties());
  const double horizon = 1.5;

  for (int g = 1; g <= 2; ++g) {
    std::set<double> expected;
    for (const Observation& o : data.group(g)) {
      if (o.status == 1 && o.exit <= horizon) expected.insert(o.exit);
    }
    // Dense evaluation grid: pooled event times and midpoints between them.
    std::vector<double> eval{0.0};
    for (double t : data.event_times()) {
      if (t > horizon) break;
      eval.push_back((eval.back() + t) / 2.0);
      eval.push_back(t);
    }

    std::vector<double> w(data.event_count(g));
    std::vector<SubjectMultipliers> m(data.group_size(g));
    double x = 0.4;
    for (double& wi : w) wi = (x += 0.7);
    x = 0.3;
    for (auto& row : m)
      for (double& wi : row) wi = (x += 0.55);

    const StepFunction vs = wb_process(data, g, w, eval);
    const StepFunction va = wb_adjusted_process(data, g, m, eval);
    for (const StepFunction* v : {&vs, &va}) {
      double scale = 0.0;
      for (double t : eval) scale = std::max(scale, std::fabs((*v)(t)));
      std::set<double> changes;
      double prev = (*v)(0.0);
      for (double t : eval) {
        if (std::fabs((*v)(t) - prev) > 1e-9 * scale) changes.insert(t);
        prev = (*v)(t);
      }
      REQUIRE(changes == expected);
    }
  }
}

// Conditional variance oracle. With mean-zero unit-variance multipliers
// and a = S2(u) - F1(t), b = F1(u) - F1(t) evaluated from the data,
//   Var V*(t)   = n * sum_u (a^2 d1 + b^2 d2) / Y^2
//   Var Vadj(t) = n * sum_u [ (a^2 dA1 + b^2 dA2) / (Y (1 - dA))
//                             + K(u)^2 dA1 dA2 / (Y (1 - dA)^2) ]
// where the second line's last term is contributed by the cross-cause
// construction at tied event times.
TEST_CASE("replicate variance matches the analytic conditional variance") {
  const TwoSampleData data = validate(std::vector<Observation>{
      {0, 1, 1, 1}, {0, 1, 2, 1}, {0, 2, 1, 1}, {0, 2, 2, 1},
      {0, 3, 0, 1}, {0, 4, 0, 1}, {0, 10, 0, 2}, {0, 11, 0, 2}});
  const double t = 2.5;
  const double n = static_cast<double>(data.total_size());
  const GroupEventTable table = build_event_table(data, 1);

  double var_standard = 0.0;
  double var_adjusted = 0.0;
  const double f1_t = table.cif1.back();  // F1 at t (after both event times)
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const double y = table.at_risk[r];
    const double da1 = table.cause1[r] / y;
    const double da2 = table.cause2[r] / y;
    const double da = da1 + da2;
    const double a = (1.0 - table.cif2[r]) - f1_t;
    const double b = table.cif1[r] - f1_t;
    const double km = table.km[r];
    var_standard += n * (a * a * table.cause1[r] + b * b * table.cause2[r]) / (y * y);
    var_adjusted += n * ((a * a * da1 + b * b * da2) / (y * (1.0 - da)) +
                         km * km * da1 * da2 / (y * (1.0 - da) * (1.0 - da)));
  }

  const int B = 200000;
  Xoshiro256pp rng(2718);
  const std::vector<double> eval{t};
  double sum_s = 0.0, ss_s = 0.0, sum_a = 0.0, ss_a = 0.0;
  std::vector<double> w(data.event_count(1));
  std::vector<SubjectMultipliers> m(data.group_size(1));
  for (int rep = 0; rep < B; ++rep) {
    for (double& wi : w) wi = rng.normal();
    for (auto& row : m)
      for (double& wi : row) wi = rng.normal();
    const double vs = wb_process(data, 1, w, eval)(t);
    const double va = wb_adjusted_process(data, 1, m, eval)(t);
    sum_s += vs;
    ss_s += vs * vs;
    sum_a += va;
    ss_a += va * va;
  }
  const double emp_standard = ss_s / B - (sum_s / B) * (sum_s / B);
  const double emp_adjusted = ss_a / B - (sum_a / B) * (sum_a / B);
  CHECK(emp_standard == doctest::Approx(var_standard).epsilon(0.03));
  CHECK(emp_adjusted == doctest::Approx(var_adjusted).epsilon(0.03));
  // The tie term is a real part of the adjusted variance here.
  CHECK(var_adjusted > var_standard);
}

TEST_CASE("resampling statistic hand values and grid checks") {
  // v1 - v2 equals 0.5 on [1,2) inside the window [0,2].
  const std::vector<double> grid{1.0, 2.0};
  const StepFunction v1(0.0, grid, {0.5, 0.0});
  const StepFunction v2(0.0, grid, {0.0, 0.0});
  const Window w{0.0, 2.0};
  CHECK(wb_statistic(v1, v2, StatKind::abc, w) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wb_statistic(v1, v2, StatKind::ks, w) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wb_statistic(v1, v2, StatKind::cvm, w) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(wb_statistic(v1, v2, StatKind::pepe, w) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wb_statistic(v1, v1, StatKind::abc, w) == 0.0);

  const StepFunction other(0.0, {1.5}, {1.0});
  CHECK_THROWS_AS(wb_statistic(v1, other, StatKind::abc, w), ValidationError);
}

TEST_CASE("bootstrap replicates are conditionally centered") {
  const TwoSampleData data = simulated(40, 40, 777);
  const Window w{0.0, 1.5};
  const int B = 10000;

  // Mean of the group-1 process at fixed times over many multiplier
  // draws, against 3 standard errors of the replicate spread.
  const std::vector<double> eval{0.4, 0.8, 1.2};
  std::vector<double> sums(eval.size(), 0.0);
  std::vector<double> sq(eval.size(), 0.0);
  Xoshiro256pp rng(31);
  std::vector<double> mult(data.event_count(1));
  for (int b = 0; b < B; ++b) {
    for (double& m : mult) m = rng.normal();
    const StepFunction v = wb_process(data, 1, mult, eval);
    for (std::size_t i = 0; i < eval.size(); ++i) {
      const double value = v(eval[i]);
      sums[i] += value;
      sq[i] += value * value;
    }
  }
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const double mean = sums[i] / B;
    const double sd = std::sqrt(sq[i] / B - mean * mean);
    REQUIRE(std::fabs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(B)));
  }
}

TEST_CASE("area, sup and squared replicates are nonnegative") {
  const TwoSampleData data = simulated(25, 25, 123, /*censored=*/true);
  const Window w{0.0, 1.5};
  for (StatKind kind : {StatKind::abc, StatKind::ks, StatKind::cvm}) {
    const auto reps = bootstrap_replicates(data, w, kind,
                                           {MultiplierFamily::poisson, false},
                                           false, 500, 99, 1);
    for (double r : reps) REQUIRE(r >= 0.0);
  }
}

TEST_CASE("replicates 1..B are a prefix of replicates 1..B'") {
  const TwoSampleData data = simulated(20, 20, 5);
  const Window w{0.0, 1.5};
  const MultiplierSpec spec{MultiplierFamily::normal, false};
  const auto small = bootstrap_replicates(data, w, StatKind::abc, spec, false,
                                          100, 42, 1);
  const auto large = bootstrap_replicates(data, w, StatKind::abc, spec, false,
                                          250, 42, 1);
  REQUIRE(small.size() == 100);
  for (std::size_t b = 0; b < small.size(); ++b) REQUIRE(small[b] == large[b]);
}

TEST_CASE("serial and parallel replicate loops agree bit for bit") {
  const TwoSampleData data = simulated(60, 50, 6, /*censored=*/true);
  const Window w{0.0, 1.0};
  const MultiplierSpec spec{MultiplierFamily::poisson, true};
  for (bool adjusted : {false, true}) {
    const auto serial = bootstrap_replicates(data, w, StatKind::abc, spec,
                                             adjusted, 400, 9, 1);
    const auto parallel = bootstrap_replicates(data, w, StatKind::abc, spec,
                                               adjusted, 400, 9, 4);
    REQUIRE(serial == parallel);
  }
}

TEST_CASE("correction scales finished replicates exactly") {
  const TwoSampleData data = simulated(50, 50, 7);
  const Window w{0.0, 1.5};
  const double factor = correction_factor(50, 50);
  for (StatKind kind : {StatKind::abc, StatKind::ks, StatKind::pepe}) {
    const auto plain = bootstrap_replicates(data, w, kind,
                                            {MultiplierFamily::poisson, false},
                                            false, 300, 21, 1);
    const auto corrected = bootstrap_replicates(data, w, kind,
                                                {MultiplierFamily::poisson, true},
                                                false, 300, 21, 1);
    for (std::size_t b = 0; b < plain.size(); ++b) {
      REQUIRE(corrected[b] == plain[b] * factor);
    }
  }
  // The squared-integral statistic picks up the factor twice.
  const auto plain = bootstrap_replicates(data, w, StatKind::cvm,
                                          {MultiplierFamily::poisson, false},
                                          false, 300, 21, 1);
  const auto corrected = bootstrap_replicates(data, w, StatKind::cvm,
                                              {MultiplierFamily::poisson, true},
                                              false, 300, 21, 1);
  for (std::size_t b = 0; b < plain.size(); ++b) {
    REQUIRE(corrected[b] == plain[b] * (factor * factor));
  }
}

TEST_CASE("multiplier families give similar upper quantiles at large n") {
  const TwoSampleData data = simulated(400, 400, 8);
  const Window w{0.0, 1.5};
  std::vector<double> quantiles;
  for (MultiplierFamily family : {MultiplierFamily::normal, MultiplierFamily::poisson,
                                  MultiplierFamily::rademacher}) {
    auto reps = bootstrap_replicates(data, w, StatKind::abc, {family, false},
                                     false, 4000, 17, 0);
    std::sort(reps.begin(), reps.end());
    quantiles.push_back(reps[static_cast<std::size_t>(std::ceil(0.95 * 4000)) - 1]);
  }
  const double lo = *std::min_element(quantiles.begin(), quantiles.end());
  const double hi = *std::max_element(quantiles.begin(), quantiles.end());
  REQUIRE((hi - lo) / hi < 0.10);
}

TEST_CASE("identical groups produce a trivial test") {
  std::vector<Observation> records;
  for (int i = 1; i <= 20; ++i) {
    records.push_back({0, 0.1 * i, i % 3 == 0 ? 2 : 1, 1});
    records.push_back({0, 0.1 * i, i % 3 == 0 ? 2 : 1, 2});
  }
  const TwoSampleData data = validate(records);
  const TestResult res = run_test(data, {0.0, 1.8}, StatKind::abc,
                                  {MultiplierFamily::poisson, false}, 200, 0.05,
                                  1234, /*adjusted=*/true);
  CHECK(res.statistic.value == 0.0);
  CHECK(res.p_value == 1.0);
  CHECK_FALSE(res.reject);
}

TEST_CASE("run_test is deterministic and matches the roster runner") {
  const TwoSampleData data = simulated(35, 45, 10, /*censored=*/true);
  const Window w{0.0, 1.5};
  const MultiplierSpec spec{MultiplierFamily::rademacher, true};
  const TestResult a = run_test(data, w, StatKind::cvm, spec, 250, 0.05, 77, false, 1);
  const TestResult b = run_test(data, w, StatKind::cvm, spec, 250, 0.05, 77, false, 3);
  CHECK(a.statistic.value == b.statistic.value);
  CHECK(a.p_value == b.p_value);
  CHECK(a.critical_value == b.critical_value);
  CHECK(a.reject == b.reject);
  CHECK(a.replicates.mean == b.replicates.mean);
  CHECK(a.replicates.sd == b.replicates.sd);

  const TestSpec ts{StatKind::cvm, spec, false};
  const auto roster = run_tests(data, w, std::span<const TestSpec>(&ts, 1), 250,
                                0.05, 77, 1);
  CHECK(roster[0].p_value == a.p_value);
  CHECK(roster[0].critical_value == a.critical_value);
}

TEST_CASE("roster runner shares draws between corrected and uncorrected entries") {
  const TwoSampleData data = simulated(50, 50, 11);
  const Window w{0.0, 1.5};
  const std::vector<TestSpec> roster{
      {StatKind::abc, {MultiplierFamily::poisson, false}, false},
      {StatKind::abc, {MultiplierFamily::poisson, true}, false},
  };
  const auto results = run_tests(data, w, roster, 200, 0.05, 5150, 1);
  const double factor = correction_factor(50, 50);
  CHECK(results[1].critical_value == results[0].critical_value * factor);
  CHECK(results[1].replicates.max == results[0].replicates.max * factor);
}

TEST_CASE("pepe test is two-sided and sign-symmetric") {
  const TwoSampleData data = simulated(60, 60, 12, /*censored=*/true);
  // Swap group labels.
  std::vector<Observation> swapped;
  for (int g = 1; g <= 2; ++g) {
    for (Observation o : data.group(g)) {
      o.group = 3 - g;
      swapped.push_back(o);
    }
  }
  const TwoSampleData mirror = validate(swapped);
  const Window w{0.0, 1.5};
  const MultiplierSpec spec{MultiplierFamily::normal, false};
  const TestResult res = run_test(data, w, StatKind::pepe, spec, 300, 0.05, 99, false);
  const TestResult res_m = run_test(mirror, w, StatKind::pepe, spec, 300, 0.05, 99, false);
  CHECK(res.raw_value == doctest::Approx(-res_m.raw_value).epsilon(1e-9));
  CHECK(res.statistic.value >= 0.0);
  CHECK(res.critical_value == doctest::Approx(1.959963985).epsilon(1e-8));
}

TEST_CASE("zabc needs enough replicates") {
  const TwoSampleData data = simulated(20, 20, 13);
  CHECK_THROWS_AS(run_test(data, {0.0, 1.5}, StatKind::zabc,
                           {MultiplierFamily::normal, false}, 1, 0.05, 1, false),
                  NumericError);
}

TEST_CASE("tie warnings are attached to unadjusted runs only") {
  std::vector<Observation> records;
  for (int i = 1; i <= 12; ++i) {
    records.push_back({0, 0.5 * ((i % 4) + 1), 1 + (i % 2), 1 + (i % 2)});
  }
  const TwoSampleData data = validate(records);
  REQUIRE(data.has_ties());
  const Window w{0.0, 1.2};
  const MultiplierSpec spec{MultiplierFamily::poisson, false};
  const TestResult plain = run_test(data, w, StatKind::abc, spec, 50, 0.05, 3, false);
  bool tie_warning = false;
  for (const auto& msg : plain.warnings) {
    tie_warning |= msg.find("tied event times") != std::string::npos;
  }
  CHECK(tie_warning);
  const TestResult adj = run_test(data, w, StatKind::abc, spec, 50, 0.05, 3, true);
  for (const auto& msg : adj.warnings) {
    CHECK(msg.find("tied event times") == std::string::npos);
  }
}

TEST_CASE("a window beyond the observation range draws a warning, not an error") {
  const TwoSampleData data = hand_dataset();  // group 1 observed up to t = 2
  const TestResult res = run_test(data, {0.0, 4.0}, StatKind::abc,
                                  {MultiplierFamily::normal, false}, 50, 0.05, 1,
                                  false);
  bool warned = false;
  for (const auto& msg : res.warnings) {
    warned |= msg.find("no subject at risk") != std::string::npos;
  }
  CHECK(warned);
}

TEST_CASE("test specs parse and canonicalize") {
  const TestSpec spec = parse_test_spec("cvm:rademacher:corrected:adjusted");
  CHECK(spec.kind == StatKind::cvm);
  CHECK(spec.multiplier.family == MultiplierFamily::rademacher);
  CHECK(spec.multiplier.corrected);
  CHECK(spec.adjusted);
  CHECK(test_name(spec) == "cvm:rademacher:corrected:adjusted");

  const TestSpec plain = parse_test_spec("pepe");
  CHECK(plain.kind == StatKind::pepe);
  CHECK(plain.multiplier.family == MultiplierFamily::poisson);
  CHECK_FALSE(plain.multiplier.corrected);

  CHECK_THROWS_AS(parse_test_spec("anova"), ConfigError);
  CHECK_THROWS_AS(parse_test_spec("abc:poisson:bogus"), ConfigError);
}
