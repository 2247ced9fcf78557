#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "ciftest/config.hpp"
#include "ciftest/csv.hpp"
#include "ciftest/errors.hpp"
#include "ciftest/estimators.hpp"
#include "ciftest/records.hpp"

using namespace ciftest;

TEST_CASE("doubles format to shortest round-trip representation") {
  for (double x : {1.0 / 3.0, 0.0, -2.5, 1e-17, 123456.789, 0.1, 1.6276e9}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("numbers parse with fraction support") {
  CHECK(parse_number("1/3", "test") == 1.0 / 3.0);
  CHECK(parse_number("0.05", "test") == 0.05);
  CHECK_THROWS_AS(parse_number("abc", "test"), ConfigError);
  CHECK_THROWS_AS(parse_number("1/0", "test"), ConfigError);
}

TEST_CASE("dataset parsing") {
  SUBCASE("columns are matched by name, extras ignored") {
    std::istringstream in(
        "site,entry,group,status,time\n"
        "x,0,1,1,1.5\n"
        "y,0.5,2,0,2.5\n");
    const auto records = parse_dataset(in, "mem");
    REQUIRE(records.size() == 2);
    CHECK(records[0].exit == 1.5);
    CHECK(records[0].status == 1);
    CHECK(records[0].group == 1);
    CHECK(records[1].entry == 0.5);
    CHECK(records[1].group == 2);
  }
  SUBCASE("entry defaults to zero") {
    std::istringstream in("time,status,group\n1,1,1\n2,0,2\n");
    const auto records = parse_dataset(in, "mem");
    CHECK(records[0].entry == 0.0);
  }
  SUBCASE("empty file names line 1") {
    std::istringstream in("");
    CHECK_THROWS_WITH_AS(parse_dataset(in, "mem"), doctest::Contains("line 1"),
                         ConfigError);
  }
  SUBCASE("errors carry line numbers") {
    std::istringstream in("time,status,group\n1,1,1\nbad,1,2\n");
    CHECK_THROWS_WITH_AS(parse_dataset(in, "mem"), doctest::Contains("line 3"),
                         ConfigError);
  }
  SUBCASE("bad codes are rejected") {
    std::istringstream a("time,status,group\n1,7,1\n");
    CHECK_THROWS_AS(parse_dataset(a, "mem"), ConfigError);
    std::istringstream b("time,status,group\n1,1,9\n");
    CHECK_THROWS_AS(parse_dataset(b, "mem"), ConfigError);
    std::istringstream c("status,group\n1,1\n");
    CHECK_THROWS_WITH_AS(parse_dataset(c, "mem"), doctest::Contains("time"),
                         ConfigError);
  }
  SUBCASE("blank lines and CR line endings are tolerated") {
    std::istringstream in("time,status,group\r\n1,1,1\r\n\r\n2,0,2\r\n");
    CHECK(parse_dataset(in, "mem").size() == 2);
  }
}

TEST_CASE("estimate tables round-trip exactly") {
  const TwoSampleData data = validate(std::vector<Observation>{
      {0, 1, 1, 1}, {0, 2, 2, 1}, {0, 3, 1, 1}, {0, 1.5, 1, 2}, {0, 4, 0, 2}});
  const std::vector<EstimatorOutput> curves{aalen_johansen(data, 1, 1),
                                            aalen_johansen(data, 2, 1)};
  std::ostringstream out;
  write_estimates_csv(out, curves);
  std::istringstream in(out.str());
  const auto parsed = parse_estimates_csv(in, "mem");
  REQUIRE(parsed.size() == 2);
  for (const auto& [g, fn] : parsed) {
    const StepFunction& original = (g == 1 ? curves[0] : curves[1]).estimate;
    REQUIRE(fn.jump_count() == original.jump_count());
    for (double t = 0.0; t < 5.0; t += 0.1) {
      REQUIRE(fn(t) == original(t));
    }
  }
}

TEST_CASE("campaign configs parse") {
  const char* text =
      "[scenario]\n"
      "model = 2\n"
      "hypothesis = h1\n"
      "sizes = 50:50, 100:100\n"
      "window = 0:1.5\n"
      "\n"
      "[censoring]\n"
      "setups = none 1/3:1.6\n"
      "\n"
      "[tests]\n"
      "roster = abc:poisson:corrected pepe ks:normal\n"
      "\n"
      "[mc]\n"
      "n_sim = 100\n"
      "B = 200\n"
      "alpha = 0.05\n"
      "seed = 31415\n"
      "threads = 2\n";
  std::istringstream in(text);
  const CampaignConfig config = parse_campaign_config(in, "mem");
  CHECK(config.model == 2);
  CHECK(config.hypothesis == Hypothesis::h1);
  REQUIRE(config.sizes.size() == 2);
  CHECK(config.sizes[1].second == 100);
  REQUIRE(config.setups.size() == 2);
  CHECK(config.setups[0].is_none());
  CHECK(config.setups[1].group1.param == doctest::Approx(1.0 / 3.0));
  REQUIRE(config.roster.size() == 3);
  CHECK(config.roster[0].multiplier.corrected);
  CHECK(config.n_sim == 100);
  CHECK(config.seed == 31415);
  // Alternative defaults were applied.
  CHECK(config.model2.shape1 == doctest::Approx(3.8));
  CHECK(config.model2.beta2 == doctest::Approx(std::pow(1.5, -1.5)));

  const auto cells = config.cells();
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].first != cells[1].first);
}

TEST_CASE("campaign config errors are specific") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_campaign_config(in, "mem");
  };
  CHECK_THROWS_WITH_AS(parse("[bogus]\n"), doctest::Contains("unknown section"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[scenario]\nmodel = 2\nfoo = 1\n"),
                       doctest::Contains("unknown key 'foo'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[tests]\nroster = abc xyz\n"),
                       doctest::Contains("unknown statistic"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("model = 2\n"), doctest::Contains("outside any section"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse("[scenario]\nmodel = 2\nhypothesis = h0\n"),
                       doctest::Contains("sizes"), ConfigError);
}

TEST_CASE("cell seeds depend on identity, not grid position") {
  const char* base =
      "[scenario]\nmodel = 1\nhypothesis = h0\nsizes = %s\n"
      "[tests]\nroster = abc\n"
      "[mc]\nn_sim = 10\nB = 50\nseed = 7\n";
  char a_text[512], b_text[512];
  std::snprintf(a_text, sizeof(a_text), base, "50:50, 100:100");
  std::snprintf(b_text, sizeof(b_text), base, "100:100, 50:50");
  std::istringstream a_in(a_text), b_in(b_text);
  const auto a_cells = parse_campaign_config(a_in, "a").cells();
  const auto b_cells = parse_campaign_config(b_in, "b").cells();
  REQUIRE(a_cells.size() == 2);
  REQUIRE(b_cells.size() == 2);
  CHECK(a_cells[0].first == b_cells[1].first);
  CHECK(a_cells[0].second.seed == b_cells[1].second.seed);
  CHECK(a_cells[0].second.seed != a_cells[1].second.seed);
}

TEST_CASE("records serialize the full configuration") {
  const TwoSampleData data = validate(std::vector<Observation>{
      {0, 1, 1, 1}, {0, 2, 0, 1}, {0, 1.5, 2, 2}, {0, 3, 1, 2}});
  TestResult result;
  result.statistic = {StatKind::abc, 1.25, {0.0, 1.5}, 2, 2};
  result.raw_value = 1.25;
  result.p_value = 0.04;
  result.critical_value = 1.0;
  result.reject = true;
  result.B = 100;
  result.seed = 9;
  result.alpha = 0.05;
  result.replicates = {100, 0.5, 0.2, 0.0, 1.2, 1.0, 0.95};
  result.warnings = {"something"};

  const TestSpec spec{StatKind::abc, {MultiplierFamily::poisson, true}, false};
  const Record rec = test_record("data.csv", data, spec, {0.0, 1.5}, false, result,
                                 JitterInfo{1e-6, 4, 2, 0});
  CHECK(rec.at("type") == "test");
  CHECK(rec.at("test") == "abc:poisson:corrected");
  CHECK(rec.at("statistic") == 1.25);
  CHECK(rec.at("reject") == true);
  CHECK(rec.at("jitter").at("ties_before") == 2);
  CHECK(rec.at("replicates").at("count") == 100);
  CHECK(rec.at("warnings").size() == 1);
}
