#include "ciftest/config.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "ciftest/csv.hpp"
#include "ciftest/errors.hpp"
#include "ciftest/rng.hpp"

namespace ciftest {

namespace {

constexpr std::uint64_t seed_tag_cell = 0xCE;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> tokens;
  std::string token;
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!token.empty()) tokens.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) tokens.push_back(token);
  return tokens;
}

std::pair<std::string, std::string> split_pair(const std::string& token,
                                               const std::string& where) {
  const auto colon = token.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
    throw ConfigError(where + ": expected a colon-separated pair, got '" + token + "'");
  }
  return {token.substr(0, colon), token.substr(colon + 1)};
}

long parse_integer(const std::string& text, const std::string& where) {
  const double v = parse_number(text, where);
  const long i = static_cast<long>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  }
  return i;
}

struct PendingOverrides {
  std::optional<double> c, beta1, shape1, beta2, shape2, p;
};

}  // namespace

std::vector<std::pair<std::string, ScenarioConfig>> CampaignConfig::cells() const {
  std::vector<std::pair<std::string, ScenarioConfig>> out;
  const std::vector<CensoringSpec> setup_list =
      setups.empty() ? std::vector<CensoringSpec>{CensoringSpec::none()} : setups;
  for (const auto& [n1, n2] : sizes) {
    for (const CensoringSpec& cens : setup_list) {
      ScenarioConfig scenario;
      scenario.model = model;
      scenario.hypothesis = hypothesis;
      scenario.model1 = model1;
      scenario.model2 = model2;
      scenario.censoring = cens;
      scenario.n1 = n1;
      scenario.n2 = n2;
      scenario.window = window;
      scenario.n_sim = n_sim;
      scenario.B = B;
      scenario.alpha = alpha;
      scenario.roster = roster;

      char buf[128];
      std::snprintf(buf, sizeof(buf), "m%d_%s_n%zux%zu_%s", model,
                    to_string(hypothesis).c_str(), n1, n2, cens.id().c_str());
      const std::string id = buf;
      // Cell seed depends on the cell identity, not its grid position,
      // so reordering or extending the grid never reshuffles results.
      scenario.seed = derive_seed(seed, seed_tag_cell, hash_string(id));
      out.emplace_back(id, scenario);
    }
  }
  return out;
}

CampaignConfig parse_campaign_config(std::istream& in, const std::string& name) {
  CampaignConfig config;
  PendingOverrides overrides;
  bool hypothesis_seen = false;
  bool model_seen = false;

  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = name + ": line " + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "censoring" && section != "tests" &&
          section != "mc") {
        throw ConfigError(where + ": unknown section [" + section +
                          "]; expected [scenario], [censoring], [tests], [mc]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(where + ": key outside any section");
    }
    if (value.empty()) {
      throw ConfigError(where + ": empty value for '" + key + "'");
    }

    if (section == "scenario") {
      if (key == "model") {
        config.model = static_cast<int>(parse_integer(value, where));
        if (config.model != 1 && config.model != 2) {
          throw ConfigError(where + ": model must be 1 or 2");
        }
        model_seen = true;
      } else if (key == "hypothesis") {
        if (value == "h0" || value == "H0") {
          config.hypothesis = Hypothesis::h0;
        } else if (value == "h1" || value == "H1") {
          config.hypothesis = Hypothesis::h1;
        } else {
          throw ConfigError(where + ": hypothesis must be h0 or h1");
        }
        hypothesis_seen = true;
      } else if (key == "sizes") {
        for (const std::string& token : split_list(value)) {
          const auto [a, b] = split_pair(token, where);
          const long n1 = parse_integer(a, where);
          const long n2 = parse_integer(b, where);
          if (n1 < 1 || n2 < 1) throw ConfigError(where + ": group sizes must be positive");
          config.sizes.emplace_back(static_cast<std::size_t>(n1),
                                    static_cast<std::size_t>(n2));
        }
      } else if (key == "window") {
        const auto [a, b] = split_pair(value, where);
        config.window = {parse_number(a, where), parse_number(b, where)};
      } else if (key == "c") {
        overrides.c = parse_number(value, where);
      } else if (key == "beta1") {
        overrides.beta1 = parse_number(value, where);
      } else if (key == "a1") {
        overrides.shape1 = parse_number(value, where);
      } else if (key == "beta2") {
        overrides.beta2 = parse_number(value, where);
      } else if (key == "a2") {
        overrides.shape2 = parse_number(value, where);
      } else if (key == "p") {
        overrides.p = parse_number(value, where);
      } else {
        throw ConfigError(where + ": unknown key '" + key + "' in [scenario]");
      }
    } else if (section == "censoring") {
      if (key == "setups") {
        for (const std::string& token : split_list(value)) {
          if (token == "none") {
            config.setups.push_back(CensoringSpec::none());
          } else {
            const auto [a, b] = split_pair(token, where);
            config.setups.push_back(
                CensoringSpec::paired(parse_number(a, where), parse_number(b, where)));
          }
        }
      } else {
        throw ConfigError(where + ": unknown key '" + key + "' in [censoring]");
      }
    } else if (section == "tests") {
      if (key == "roster") {
        for (const std::string& token : split_list(value)) {
          config.roster.push_back(parse_test_spec(token));
        }
      } else {
        throw ConfigError(where + ": unknown key '" + key + "' in [tests]");
      }
    } else {  // [mc]
      if (key == "n_sim") {
        config.n_sim = static_cast<int>(parse_integer(value, where));
      } else if (key == "B") {
        config.B = static_cast<int>(parse_integer(value, where));
      } else if (key == "alpha") {
        config.alpha = parse_number(value, where);
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_integer(value, where));
      } else if (key == "threads") {
        config.threads = static_cast<int>(parse_integer(value, where));
      } else {
        throw ConfigError(where + ": unknown key '" + key + "' in [mc]");
      }
    }
  }

  if (!model_seen) throw ConfigError(name + ": [scenario] model is required");
  if (!hypothesis_seen) throw ConfigError(name + ": [scenario] hypothesis is required");
  if (config.sizes.empty()) throw ConfigError(name + ": [scenario] sizes is required");
  if (config.roster.empty()) throw ConfigError(name + ": [tests] roster is required");

  config.model1.c = model1_default_c(config.hypothesis);
  config.model2 = model2_defaults(config.hypothesis);
  if (overrides.c) config.model1.c = *overrides.c;
  if (overrides.beta1) config.model2.beta1 = *overrides.beta1;
  if (overrides.shape1) config.model2.shape1 = *overrides.shape1;
  if (overrides.beta2) config.model2.beta2 = *overrides.beta2;
  if (overrides.shape2) config.model2.shape2 = *overrides.shape2;
  if (overrides.p) config.model2.p = *overrides.p;

  return config;
}

CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_campaign_config(in, path);
}

}  // namespace ciftest
