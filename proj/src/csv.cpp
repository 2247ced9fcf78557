#include "ciftest/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ciftest/errors.hpp"

namespace ciftest {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest representation that still round-trips.
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", precision, x);
    if (std::strtod(shorter, nullptr) == x) return shorter;
  }
  return buf;
}

double parse_number(const std::string& text, const std::string& where) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number(text.substr(0, slash), where);
    const double den = parse_number(text.substr(slash + 1), where);
    if (den == 0.0) throw ConfigError(where + ": division by zero in '" + text + "'");
    return num / den;
  }
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(where + ": not a number: '" + text + "'");
  }
  return value;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

long parse_code(const std::string& text, const std::string& where) {
  const double v = parse_number(text, where);
  const long code = static_cast<long>(v);
  if (static_cast<double>(code) != v) {
    throw ConfigError(where + ": expected an integer code, got '" + text + "'");
  }
  return code;
}

}  // namespace

std::vector<Observation> parse_dataset(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(name + ": line 1: missing header (expected time,status,group[,entry])");
  }
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string col = trim(header[i]);
    if (col == "time" || col == "status" || col == "group" || col == "entry") {
      if (columns.count(col)) {
        throw ConfigError(name + ": line 1: duplicate column '" + col + "'");
      }
      columns[col] = i;
    }
  }
  for (const char* required : {"time", "status", "group"}) {
    if (!columns.count(required)) {
      throw ConfigError(name + ": line 1: missing required column '" +
                        std::string(required) + "'");
    }
  }
  const bool has_entry = columns.count("entry") > 0;

  std::vector<Observation> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = name + ": line " + std::to_string(lineno);
    auto field = [&](const std::string& col) -> std::string {
      const std::size_t idx = columns.at(col);
      if (idx >= fields.size()) {
        throw ConfigError(where + ": missing value for column '" + col + "'");
      }
      return trim(fields[idx]);
    };
    Observation obs;
    obs.exit = parse_number(field("time"), where + ", column time");
    obs.status = static_cast<int>(parse_code(field("status"), where + ", column status"));
    obs.group = static_cast<int>(parse_code(field("group"), where + ", column group"));
    obs.entry = has_entry ? parse_number(field("entry"), where + ", column entry") : 0.0;
    if (obs.status < 0 || obs.status > 2) {
      throw ConfigError(where + ": status must be 0, 1 or 2");
    }
    if (obs.group != 1 && obs.group != 2) {
      throw ConfigError(where + ": group must be 1 or 2");
    }
    records.push_back(obs);
  }
  if (records.empty()) {
    throw ConfigError(name + ": no data rows");
  }
  return records;
}

std::vector<Observation> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
  return parse_dataset(in, path);
}

void write_estimates_csv(std::ostream& out,
                         const std::vector<EstimatorOutput>& curves) {
  out << "group,time,estimate\n";
  for (const EstimatorOutput& curve : curves) {
    out << curve.group << ",0," << format_double(curve.estimate.initial_value())
        << "\n";
    const auto times = curve.estimate.jump_times();
    const auto values = curve.estimate.values_after();
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << curve.group << "," << format_double(times[i]) << ","
          << format_double(values[i]) << "\n";
    }
  }
}

std::vector<std::pair<int, StepFunction>> parse_estimates_csv(
    std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(name + ": line 1: missing header");
  }
  struct Accum {
    double initial = 0.0;
    bool has_initial = false;
    std::vector<double> times, values;
  };
  std::map<int, Accum> groups;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    const std::string where = name + ": line " + std::to_string(lineno);
    if (fields.size() != 3) throw ConfigError(where + ": expected 3 columns");
    const int g = static_cast<int>(parse_code(trim(fields[0]), where));
    const double t = parse_number(trim(fields[1]), where);
    const double v = parse_number(trim(fields[2]), where);
    Accum& acc = groups[g];
    if (!acc.has_initial) {
      acc.initial = v;
      acc.has_initial = true;
    } else {
      acc.times.push_back(t);
      acc.values.push_back(v);
    }
  }
  std::vector<std::pair<int, StepFunction>> out;
  for (auto& [g, acc] : groups) {
    out.emplace_back(g, StepFunction(acc.initial, std::move(acc.times),
                                     std::move(acc.values)));
  }
  return out;
}

}  // namespace ciftest
