#include "ciftest/records.hpp"

#include <fstream>

#include "ciftest/errors.hpp"
#include "ciftest/version.hpp"

namespace ciftest {

namespace {

Record window_record(const Window& w) {
  return Record{{"t1", w.t1}, {"t2", w.t2}};
}

Record multiplier_record(const MultiplierSpec& spec) {
  return Record{{"family", to_string(spec.family)}, {"corrected", spec.corrected}};
}

}  // namespace

Record test_record(const std::string& dataset, const TwoSampleData& data,
                   const TestSpec& spec, const Window& window, bool window_auto,
                   const TestResult& result,
                   const std::optional<JitterInfo>& jitter) {
  Record rec;
  rec["type"] = "test";
  rec["tool_version"] = version;
  rec["dataset"] = dataset;
  rec["n1"] = data.group_size(1);
  rec["n2"] = data.group_size(2);
  rec["tied_event_times"] = data.ties().size();
  rec["test"] = test_name(spec);
  rec["kind"] = to_string(spec.kind);
  rec["multiplier"] = multiplier_record(spec.multiplier);
  rec["adjusted"] = spec.adjusted;
  rec["window"] = window_record(window);
  rec["window_auto"] = window_auto;
  rec["B"] = result.B;
  rec["alpha"] = result.alpha;
  rec["seed"] = result.seed;
  if (jitter) {
    rec["jitter"] = Record{{"epsilon", jitter->epsilon},
                           {"seed", jitter->seed},
                           {"ties_before", jitter->ties_before},
                           {"ties_after", jitter->ties_after}};
  } else {
    rec["jitter"] = nullptr;
  }
  if (spec.kind == StatKind::zabc) {
    rec["calibration_note"] =
        "standardization moments reconstructed from bootstrap replicates";
  }
  rec["statistic"] = result.statistic.value;
  rec["raw_value"] = result.raw_value;
  rec["critical_value"] = result.critical_value;
  rec["p_value"] = result.p_value;
  rec["reject"] = result.reject;
  rec["replicates"] = Record{{"count", result.replicates.count},
                             {"mean", result.replicates.mean},
                             {"sd", result.replicates.sd},
                             {"min", result.replicates.min},
                             {"max", result.replicates.max},
                             {"quantile", result.replicates.quantile},
                             {"quantile_level", result.replicates.quantile_level}};
  rec["warnings"] = result.warnings;
  return rec;
}

Record simulation_cell_record(const std::string& cell_id,
                              const ScenarioConfig& config,
                              std::uint64_t master_seed,
                              const RejectionTable& table) {
  Record rec;
  rec["type"] = "simulation_cell";
  rec["tool_version"] = version;
  rec["cell"] = cell_id;
  rec["model"] = config.model;
  rec["hypothesis"] = to_string(config.hypothesis);
  if (config.model == 1) {
    rec["params"] = Record{{"c", config.model1.c}};
  } else {
    rec["params"] = Record{{"beta1", config.model2.beta1},
                           {"shape1", config.model2.shape1},
                           {"beta2", config.model2.beta2},
                           {"shape2", config.model2.shape2},
                           {"p", config.model2.p}};
  }
  rec["censoring"] = Record{{"id", config.censoring.id()},
                            {"description", config.censoring.describe()}};
  rec["n1"] = config.n1;
  rec["n2"] = config.n2;
  rec["window"] = window_record(config.window);
  rec["n_sim"] = config.n_sim;
  rec["B"] = config.B;
  rec["alpha"] = config.alpha;
  rec["master_seed"] = master_seed;
  rec["cell_seed"] = config.seed;
  Record tests = Record::array();
  for (const TestCellResult& cell : table.tests) {
    tests.push_back(Record{{"test", cell.test},
                           {"rejects", cell.rejects},
                           {"rate", cell.rate},
                           {"std_error", cell.std_error}});
  }
  rec["results"] = tests;
  return rec;
}

void append_record(const std::string& path, const Record& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open results log '" + path + "'");
  out << record.dump() << "\n";
}

}  // namespace ciftest
