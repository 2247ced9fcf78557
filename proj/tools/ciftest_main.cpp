// Command-line front end: estimation, two-sample testing, and Monte
// Carlo simulation campaigns for competing-risks data.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ciftest/bootstrap.hpp"
#include "ciftest/config.hpp"
#include "ciftest/csv.hpp"
#include "ciftest/errors.hpp"
#include "ciftest/estimators.hpp"
#include "ciftest/records.hpp"
#include "ciftest/simulation.hpp"
#include "ciftest/svg.hpp"
#include "ciftest/version.hpp"

namespace fs = std::filesystem;
using namespace ciftest;

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("CIFTEST_OUT_DIR")) return env;
  return ".";
}

std::string log_path(const std::string& out_dir) {
  return (fs::path(out_dir) / "runs.jsonl").string();
}

Window parse_window_flag(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--window: expected t1:t2, got '" + text + "'");
  }
  return {parse_number(text.substr(0, colon), "--window"),
          parse_number(text.substr(colon + 1), "--window")};
}

// Conservative default window: from 0 to the last time both groups are
// still under observation.
Window default_window(const TwoSampleData& data) {
  return {0.0, std::min(data.last_exit(1), data.last_exit(2))};
}

double auto_jitter_eps(const std::vector<Observation>& records) {
  double max_time = 0.0;
  for (const Observation& o : records) max_time = std::max(max_time, o.exit);
  return 1e-6 * max_time;
}

constexpr std::uint64_t seed_tag_jitter = 0x71;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct EstimateArgs {
  std::string data_path;
  int group = 0;  // 0 = both
  int cause = 1;
  std::string out_dir = default_out_dir();
  bool plot = false;
};

int run_estimate(const EstimateArgs& args) {
  const auto records = read_dataset(args.data_path);
  const TwoSampleData data = validate(records);

  std::vector<EstimatorOutput> curves;
  for (int g : {1, 2}) {
    if (args.group == 0 || args.group == g) {
      curves.push_back(aalen_johansen(data, g, args.cause));
    }
  }

  fs::create_directories(args.out_dir);
  const fs::path csv_path =
      fs::path(args.out_dir) / ("cif_cause" + std::to_string(args.cause) + ".csv");
  std::ofstream out(csv_path);
  if (!out) throw ConfigError("cannot open output file '" + csv_path.string() + "'");
  write_estimates_csv(out, curves);
  std::cout << "wrote " << csv_path.string() << "\n";

  if (args.plot) {
    std::vector<StepSeries> series;
    double x_max = 0.0;
    for (const EstimatorOutput& c : curves) {
      series.push_back({"group " + std::to_string(c.group), c.estimate});
      x_max = std::max(x_max, c.support_end);
    }
    const fs::path svg_path =
        fs::path(args.out_dir) / ("cif_cause" + std::to_string(args.cause) + ".svg");
    write_step_plot(svg_path.string(),
                    "Cumulative incidence, cause " + std::to_string(args.cause),
                    series, x_max);
    std::cout << "wrote " << svg_path.string() << "\n";
  }
  return 0;
}

struct TestArgs {
  std::string data_path;
  std::string window_text;
  std::string kind = "abc";
  std::string multiplier = "poisson";
  bool corrected = false;
  bool adjusted = false;
  int B = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> jitter_vals;
  bool jitter_given = false;
  int threads = 1;
  std::string out_dir = default_out_dir();
  bool plot = false;
};

int run_test_cmd(const TestArgs& args) {
  auto records = read_dataset(args.data_path);

  std::optional<JitterInfo> jitter;
  if (args.jitter_given) {
    JitterInfo info;
    const bool has_value = !args.jitter_vals.empty() && !args.jitter_vals[0].empty();
    info.epsilon = has_value ? parse_number(args.jitter_vals[0], "--jitter")
                             : auto_jitter_eps(records);
    info.seed = derive_seed(args.seed, seed_tag_jitter);
    info.ties_before = validate(records).ties().size();
    Xoshiro256pp rng(info.seed);
    for (Observation& o : records) {
      o.exit += (rng.uniform() - 0.5) * info.epsilon;
    }
    info.ties_after = validate(records).ties().size();
    jitter = info;
  }

  const TwoSampleData data = validate(records);
  const bool window_auto = args.window_text.empty();
  const Window window =
      window_auto ? default_window(data) : parse_window_flag(args.window_text);

  TestSpec spec;
  spec.kind = stat_kind_from_string(args.kind);
  spec.multiplier.family = multiplier_family_from_string(args.multiplier);
  spec.multiplier.corrected = args.corrected;
  spec.adjusted = args.adjusted;

  const TestResult result = run_test(data, window, spec.kind, spec.multiplier,
                                     args.B, args.alpha, args.seed, spec.adjusted,
                                     args.threads);

  fs::create_directories(args.out_dir);
  const Record record = test_record(args.data_path, data, spec, window, window_auto,
                                    result, jitter);
  append_record(log_path(args.out_dir), record);

  std::cout << "two-sample test of equal cause-1 cumulative incidence\n"
            << "  test:        " << test_name(spec) << "\n"
            << "  dataset:     " << args.data_path << " (n1 = " << data.group_size(1)
            << ", n2 = " << data.group_size(2) << ")\n"
            << "  window:      [" << format_double(window.t1) << ", "
            << format_double(window.t2) << "]" << (window_auto ? " (auto)" : "")
            << "\n";
  if (jitter) {
    std::cout << "  jitter:      eps = " << format_double(jitter->epsilon)
              << ", tied times " << jitter->ties_before << " -> "
              << jitter->ties_after << "\n";
  }
  std::cout << "  B:           " << result.B << "  (seed " << result.seed << ")\n"
            << "  statistic:   " << format_double(result.statistic.value) << "\n";
  if (spec.kind == StatKind::pepe || spec.kind == StatKind::zabc) {
    std::cout << "  raw value:   " << format_double(result.raw_value) << "\n";
  }
  if (spec.kind == StatKind::zabc) {
    std::cout << "  note:        standardization moments reconstructed from "
                 "bootstrap replicates\n";
  }
  std::cout << "  critical:    " << format_double(result.critical_value) << "\n"
            << "  p-value:     " << format_double(result.p_value) << "\n"
            << "  decision:    "
            << (result.reject ? "reject" : "do not reject")
            << " at level " << format_double(result.alpha) << "\n";
  print_warnings(result.warnings);

  if (args.plot) {
    std::vector<StepSeries> series;
    for (int g : {1, 2}) {
      series.push_back({"group " + std::to_string(g),
                        aalen_johansen(data, g, 1).estimate});
    }
    const fs::path svg_path = fs::path(args.out_dir) / "test_curves.svg";
    write_step_plot(svg_path.string(), "Cause-1 cumulative incidence", series,
                    window.t2);
    std::cout << "wrote " << svg_path.string() << "\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir = default_out_dir();
  bool force = false;
  int threads = 0;  // 0 = take the config's value
  bool plot = false;
};

int run_simulate(const SimulateArgs& args) {
  const CampaignConfig config = load_campaign_config(args.config_path);
  const int threads = args.threads != 0 ? args.threads : config.threads;

  const fs::path out_dir(args.out_dir);
  const fs::path cell_dir = out_dir / "cells";
  fs::create_directories(cell_dir);

  const auto cells = config.cells();
  std::vector<Record> cell_records;
  std::size_t index = 0;
  for (const auto& [id, scenario] : cells) {
    ++index;
    const fs::path cell_path = cell_dir / (id + ".json");
    if (!args.force && fs::exists(cell_path)) {
      std::ifstream in(cell_path);
      cell_records.push_back(Record::parse(in));
      std::cerr << "cell " << index << "/" << cells.size() << " " << id
                << ": already present, skipped\n";
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    const RejectionTable table = monte_carlo_rejection_rates(scenario, threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    const Record record = simulation_cell_record(id, scenario, config.seed, table);
    // Write atomically so an interrupted campaign never leaves a
    // half-written cell behind.
    const fs::path tmp_path = cell_dir / (id + ".json.tmp");
    {
      std::ofstream out(tmp_path);
      if (!out) throw ConfigError("cannot open '" + tmp_path.string() + "'");
      out << record.dump(2) << "\n";
    }
    fs::rename(tmp_path, cell_path);
    append_record(log_path(args.out_dir), record);
    cell_records.push_back(record);

    char timing[64];
    std::snprintf(timing, sizeof(timing), "%.1f s", elapsed);
    std::cerr << "cell " << index << "/" << cells.size() << " " << id << ": done ("
              << timing << ")\n";

    if (args.plot) {
      std::vector<Bar> bars;
      for (const TestCellResult& t : table.tests) {
        bars.push_back({t.test, t.rate});
      }
      write_bar_plot((out_dir / ("rates_" + id + ".svg")).string(),
                     "Rejection rates, " + id, bars);
    }
  }

  // Combined summary across all cells, in grid order.
  const fs::path summary_path = out_dir / "summary.csv";
  std::ofstream summary(summary_path);
  if (!summary) throw ConfigError("cannot open '" + summary_path.string() + "'");
  summary << "cell,model,hypothesis,n1,n2,censoring,test,rejects,rate,std_error,"
             "n_sim,B,alpha\n";
  for (const Record& rec : cell_records) {
    for (const auto& test : rec.at("results")) {
      summary << rec.at("cell").get<std::string>() << "," << rec.at("model") << ","
              << rec.at("hypothesis").get<std::string>() << "," << rec.at("n1")
              << "," << rec.at("n2") << ","
              << rec.at("censoring").at("id").get<std::string>() << ","
              << test.at("test").get<std::string>() << "," << test.at("rejects")
              << "," << format_double(test.at("rate").get<double>()) << ","
              << format_double(test.at("std_error").get<double>()) << ","
              << rec.at("n_sim") << "," << rec.at("B") << ","
              << format_double(rec.at("alpha").get<double>()) << "\n";
    }
  }
  std::cout << "wrote " << summary_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample comparison of cumulative incidence functions under "
               "competing risks, calibrated by a wild bootstrap"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Export cumulative incidence estimates as CSV (and SVG)");
  estimate->add_option("--data", est.data_path, "dataset CSV file")->required();
  estimate->add_option("--group", est.group, "restrict to one group")
      ->check(CLI::IsMember({1, 2}));
  estimate->add_option("--cause", est.cause, "event cause of interest")
      ->check(CLI::IsMember({1, 2}));
  estimate->add_option("--out", est.out_dir, "output directory");
  estimate->add_flag("--plot", est.plot, "also write an SVG plot");

  TestArgs test;
  CLI::App* test_cmd =
      app.add_subcommand("test", "Run a two-sample test on a dataset");
  test_cmd->add_option("--data", test.data_path, "dataset CSV file")->required();
  test_cmd->add_option("--window", test.window_text,
                       "time window t1:t2 (default: 0 to the last time both "
                       "groups are at risk)");
  test_cmd->add_option("--kind", test.kind, "test statistic")
      ->check(CLI::IsMember({"abc", "ks", "cvm", "pepe", "zabc"}));
  test_cmd->add_option("--multiplier", test.multiplier, "multiplier family")
      ->check(CLI::IsMember({"normal", "poisson", "rademacher"}));
  test_cmd->add_flag("--corrected", test.corrected,
                     "apply the small-sample multiplier correction 1 + r_n");
  test_cmd->add_flag("--adjusted", test.adjusted,
                     "use the tie-adjusted bootstrap process");
  test_cmd->add_option("--B", test.B, "bootstrap replicates")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--alpha", test.alpha, "significance level");
  test_cmd->add_option("--seed", test.seed, "master seed");
  CLI::Option* jitter_opt =
      test_cmd
          ->add_option("--jitter", test.jitter_vals,
                       "break ties by adding uniform(-eps/2, eps/2) noise to "
                       "every time; without a value eps = 1e-6 * max time")
          ->expected(0, 1);
  test_cmd->add_option("--threads", test.threads,
                       "worker threads for the bootstrap loop (0 = default pool)");
  test_cmd->add_option("--out", test.out_dir, "output directory");
  test_cmd->add_flag("--plot", test.plot, "write an SVG of both incidence curves");

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a Monte Carlo simulation campaign");
  simulate->add_option("--config", sim.config_path, "campaign configuration file")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_flag("--force", sim.force, "recompute cells that already exist");
  simulate->add_option("--threads", sim.threads,
                       "worker threads (overrides the config value)");
  simulate->add_flag("--plot", sim.plot, "write per-cell rejection-rate SVGs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return run_estimate(est);
    if (*test_cmd) {
      test.jitter_given = jitter_opt->count() > 0;
      return run_test_cmd(test);
    }
    if (*simulate) return run_simulate(sim);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
