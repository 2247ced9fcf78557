#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ciftest/bootstrap.hpp"
#include "ciftest/data.hpp"
#include "ciftest/rng.hpp"
#include "ciftest/statistics.hpp"

namespace ciftest {

enum class Hypothesis { h0, h1 };

std::string to_string(Hypothesis h);

// Data-generating model 1: competing-risks event times driven by
// cause-specific hazards.
//   group 1: hazards exp(-t) and 1 - exp(-t); the all-cause rate is 1,
//            so T is standard exponential and the event is cause 1 with
//            probability exp(-T).
//   group 2: constant hazards c and 2 - c; T is exponential with rate 2
//            and the event is cause 1 with probability c/2.
// c = 1 makes the cause-1 cumulative incidence functions of the two
// groups equal; c < 1 gives an ordered alternative.
struct Model1Params {
  double c = 0.65;
};

// Data-generating model 2: cumulative incidence functions
//   F_1(t) = p (1 - exp(-beta t^shape)),
//   F_2(t) = (1 - p)(1 - exp(-beta t^shape)),
// so the all-cause time is Weibull (sampled by inversion) and the cause
// is 1 with probability p, independently of the time.
struct Model2Params {
  double beta1 = 0.0;
  double shape1 = 0.0;
  double beta2 = 0.0;
  double shape2 = 0.0;
  double p = 0.6;
};

// Built-in parameter sets. Under the null both groups share shape 3 and
// scale 1.2 (beta = 1.2^-3). The alternative makes the cause-1 curves
// cross with a near-zero integrated difference: group 1 shape 3.8 scale
// 1.2, group 2 shape 1.5 scale 1.5.
Model2Params model2_defaults(Hypothesis h);
double model1_default_c(Hypothesis h);

struct GroupCensoring {
  enum class Kind { none, exponential, uniform };
  Kind kind = Kind::none;
  double param = 0.0;  // exponential rate, or uniform upper bound
};

// Censoring setup for both groups. The paired form censors group 1 with
// an exponential(rate) time and group 2 with a uniform(0, bound) time;
// per-group overrides are available for sensitivity checks.
struct CensoringSpec {
  GroupCensoring group1;
  GroupCensoring group2;

  static CensoringSpec none() { return {}; }
  static CensoringSpec paired(double rate, double bound) {
    return {{GroupCensoring::Kind::exponential, rate},
            {GroupCensoring::Kind::uniform, bound}};
  }

  bool is_none() const;
  std::string id() const;     // file-name-safe label
  std::string describe() const;
};

struct SimEvent {
  double time = 0.0;
  int cause = 1;
};

// Event-time samplers. Both draw the all-cause time first, then assign
// the cause from its conditional probability given the time.
SimEvent sample_event_model1(int group, double c, Xoshiro256pp& rng);
SimEvent sample_event_model2(double beta, double shape, double cause1_prob,
                             Xoshiro256pp& rng);

// Draws the censoring time per the group's law and resolves the
// observation: exit = min(T, C), status = cause when T <= C, else 0.
Observation apply_censoring(const SimEvent& event, const GroupCensoring& law,
                            int group, Xoshiro256pp& rng);

// One full simulation cell.
struct ScenarioConfig {
  int model = 2;
  Hypothesis hypothesis = Hypothesis::h0;
  Model1Params model1;
  Model2Params model2 = model2_defaults(Hypothesis::h0);
  CensoringSpec censoring;
  std::size_t n1 = 50;
  std::size_t n2 = 50;
  Window window{0.0, 1.5};
  int n_sim = 1000;
  int B = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<TestSpec> roster;
};

// Scenario with the built-in parameters for (model, hypothesis).
ScenarioConfig make_scenario(int model, Hypothesis h);

Observation simulate_observation(const ScenarioConfig& config, int group,
                                 Xoshiro256pp& rng);

// One simulated dataset: n1 group-1 subjects, then n2 group-2 subjects.
TwoSampleData simulate_dataset(const ScenarioConfig& config, Xoshiro256pp& rng);

// Fraction of censored records among n_events simulated subjects per
// group, under the scenario's model and censoring spec.
std::pair<double, double> empirical_censoring_rate(const ScenarioConfig& config,
                                                   std::size_t n_events);

struct TestCellResult {
  std::string test;
  int rejects = 0;
  double rate = 0.0;
  double std_error = 0.0;
};

struct RejectionTable {
  int n_sim = 0;
  std::vector<TestCellResult> tests;
};

// Runs n_sim replications: each simulates both groups and runs every
// roster test at level alpha. Replication r depends only on
// (config.seed, r), so the table is deterministic for any thread count.
// threads == 1 is the serial reference loop; other values run the
// OpenMP kernel over replications (0 = library default).
RejectionTable monte_carlo_rejection_rates(const ScenarioConfig& config,
                                           int threads = 1);

}  // namespace ciftest
