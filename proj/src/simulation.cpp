#include "ciftest/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ciftest/errors.hpp"

namespace ciftest {

namespace {

constexpr std::uint64_t seed_tag_sim_data = 0x5D;
constexpr std::uint64_t seed_tag_sim_test = 0x5E;
constexpr std::uint64_t seed_tag_cens_rate = 0x5F;

std::string format_param(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

std::string to_string(Hypothesis h) {
  return h == Hypothesis::h0 ? "h0" : "h1";
}

Model2Params model2_defaults(Hypothesis h) {
  Model2Params params;
  if (h == Hypothesis::h0) {
    params.beta1 = params.beta2 = std::pow(1.2, -3.0);
    params.shape1 = params.shape2 = 3.0;
  } else {
    params.beta1 = std::pow(1.2, -3.8);
    params.shape1 = 3.8;
    params.beta2 = std::pow(1.5, -1.5);
    params.shape2 = 1.5;
  }
  params.p = 0.6;
  return params;
}

double model1_default_c(Hypothesis h) {
  return h == Hypothesis::h0 ? 1.0 : 0.65;
}

bool CensoringSpec::is_none() const {
  return group1.kind == GroupCensoring::Kind::none &&
         group2.kind == GroupCensoring::Kind::none;
}

namespace {

std::string censoring_label(const GroupCensoring& law) {
  switch (law.kind) {
    case GroupCensoring::Kind::none: return "none";
    case GroupCensoring::Kind::exponential: return "exp" + format_param(law.param);
    case GroupCensoring::Kind::uniform: return "unif" + format_param(law.param);
  }
  return "?";
}

}  // namespace

std::string CensoringSpec::id() const {
  if (is_none()) return "none";
  return censoring_label(group1) + "-" + censoring_label(group2);
}

std::string CensoringSpec::describe() const {
  if (is_none()) return "uncensored";
  auto one = [](const GroupCensoring& law) -> std::string {
    switch (law.kind) {
      case GroupCensoring::Kind::none: return "none";
      case GroupCensoring::Kind::exponential:
        return "exponential(rate " + format_param(law.param) + ")";
      case GroupCensoring::Kind::uniform:
        return "uniform(0, " + format_param(law.param) + ")";
    }
    return "?";
  };
  return "group 1: " + one(group1) + ", group 2: " + one(group2);
}

SimEvent sample_event_model1(int group, double c, Xoshiro256pp& rng) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw ValidationError("model 1: c must lie in [0, 1]");
  }
  if (group == 1) {
    const double t = rng.exponential(1.0);
    const int cause = rng.uniform() < std::exp(-t) ? 1 : 2;
    return {t, cause};
  }
  if (group == 2) {
    const double t = rng.exponential(2.0);
    const int cause = rng.uniform() < c / 2.0 ? 1 : 2;
    return {t, cause};
  }
  throw ValidationError("unknown group " + std::to_string(group) + "; expected 1 or 2");
}

SimEvent sample_event_model2(double beta, double shape, double cause1_prob,
                             Xoshiro256pp& rng) {
  if (!(beta > 0.0) || !(shape > 0.0)) {
    throw ValidationError("model 2: beta and shape must be positive");
  }
  if (!(cause1_prob > 0.0 && cause1_prob < 1.0)) {
    throw ValidationError("model 2: p must lie in (0, 1)");
  }
  // Inversion of the all-cause distribution 1 - exp(-beta t^shape).
  const double t = std::pow(-std::log(rng.uniform_pos()) / beta, 1.0 / shape);
  const int cause = rng.uniform() < cause1_prob ? 1 : 2;
  return {t, cause};
}

Observation apply_censoring(const SimEvent& event, const GroupCensoring& law,
                            int group, Xoshiro256pp& rng) {
  double censor = 0.0;
  switch (law.kind) {
    case GroupCensoring::Kind::none:
      return {0.0, event.time, event.cause, group};
    case GroupCensoring::Kind::exponential:
      censor = rng.exponential(law.param);
      break;
    case GroupCensoring::Kind::uniform:
      censor = law.param * rng.uniform_pos();
      break;
  }
  // The event wins a tie.
  if (event.time <= censor) {
    return {0.0, event.time, event.cause, group};
  }
  return {0.0, censor, 0, group};
}

ScenarioConfig make_scenario(int model, Hypothesis h) {
  if (model != 1 && model != 2) {
    throw ConfigError("unknown model " + std::to_string(model) + "; expected 1 or 2");
  }
  ScenarioConfig config;
  config.model = model;
  config.hypothesis = h;
  config.model1.c = model1_default_c(h);
  config.model2 = model2_defaults(h);
  return config;
}

Observation simulate_observation(const ScenarioConfig& config, int group,
                                 Xoshiro256pp& rng) {
  SimEvent event;
  if (config.model == 1) {
    event = sample_event_model1(group, config.model1.c, rng);
  } else {
    const double beta = group == 1 ? config.model2.beta1 : config.model2.beta2;
    const double shape = group == 1 ? config.model2.shape1 : config.model2.shape2;
    event = sample_event_model2(beta, shape, config.model2.p, rng);
  }
  const GroupCensoring& law =
      group == 1 ? config.censoring.group1 : config.censoring.group2;
  return apply_censoring(event, law, group, rng);
}

TwoSampleData simulate_dataset(const ScenarioConfig& config, Xoshiro256pp& rng) {
  std::vector<Observation> records;
  records.reserve(config.n1 + config.n2);
  for (std::size_t i = 0; i < config.n1; ++i) {
    records.push_back(simulate_observation(config, 1, rng));
  }
  for (std::size_t i = 0; i < config.n2; ++i) {
    records.push_back(simulate_observation(config, 2, rng));
  }
  return validate(records);
}

std::pair<double, double> empirical_censoring_rate(const ScenarioConfig& config,
                                                   std::size_t n_events) {
  if (n_events < 1) {
    throw ValidationError("censoring rate: need at least one simulated subject");
  }
  double rates[2];
  for (int g = 1; g <= 2; ++g) {
    Xoshiro256pp rng(derive_seed(config.seed, seed_tag_cens_rate,
                                 static_cast<std::uint64_t>(g)));
    std::size_t censored = 0;
    for (std::size_t i = 0; i < n_events; ++i) {
      if (simulate_observation(config, g, rng).status == 0) ++censored;
    }
    rates[g - 1] = static_cast<double>(censored) / static_cast<double>(n_events);
  }
  return {rates[0], rates[1]};
}

RejectionTable monte_carlo_rejection_rates(const ScenarioConfig& config,
                                           int threads) {
  if (config.roster.empty()) {
    throw ValidationError("simulation: empty test roster");
  }
  if (config.n_sim < 1) {
    throw ValidationError("simulation: n_sim must be at least 1");
  }
  validate_window(config.window);

  const std::size_t n_tests = config.roster.size();
  std::vector<unsigned char> rejects(static_cast<std::size_t>(config.n_sim) *
                                     n_tests);

  std::mutex error_mutex;
  std::string first_error;

  auto body = [&](int r) {
    try {
      Xoshiro256pp data_rng(derive_seed(config.seed, seed_tag_sim_data,
                                        static_cast<std::uint64_t>(r)));
      const TwoSampleData data = simulate_dataset(config, data_rng);
      const std::uint64_t test_seed =
          derive_seed(config.seed, seed_tag_sim_test, static_cast<std::uint64_t>(r));
      const auto results = run_tests(data, config.window, config.roster, config.B,
                                     config.alpha, test_seed, /*threads=*/1);
      for (std::size_t e = 0; e < n_tests; ++e) {
        rejects[static_cast<std::size_t>(r) * n_tests + e] =
            results[e].reject ? 1 : 0;
      }
    } catch (const std::exception& ex) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (first_error.empty()) {
        first_error = "replication " + std::to_string(r + 1) + ": " + ex.what();
      }
    }
  };

#ifdef _OPENMP
  if (threads == 1) {
    for (int r = 0; r < config.n_sim; ++r) body(r);
  } else if (threads <= 0) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < config.n_sim; ++r) body(r);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int r = 0; r < config.n_sim; ++r) body(r);
  }
#else
  (void)threads;
  for (int r = 0; r < config.n_sim; ++r) body(r);
#endif

  if (!first_error.empty()) {
    throw Error("simulation cell aborted at " + first_error);
  }

  RejectionTable table;
  table.n_sim = config.n_sim;
  table.tests.reserve(n_tests);
  for (std::size_t e = 0; e < n_tests; ++e) {
    TestCellResult cell;
    cell.test = test_name(config.roster[e]);
    for (int r = 0; r < config.n_sim; ++r) {
      cell.rejects += rejects[static_cast<std::size_t>(r) * n_tests + e];
    }
    cell.rate = static_cast<double>(cell.rejects) / static_cast<double>(config.n_sim);
    cell.std_error =
        std::sqrt(cell.rate * (1.0 - cell.rate) / static_cast<double>(config.n_sim));
    table.tests.push_back(std::move(cell));
  }
  return table;
}

}  // namespace ciftest
