#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ciftest/data.hpp"
#include "ciftest/estimators.hpp"

namespace ciftest {

// Shortest exact decimal representation that round-trips a double.
std::string format_double(double x);

// Strict numeric parsing; `where` prefixes the error message. Accepts a
// plain decimal or a fraction "a/b".
double parse_number(const std::string& text, const std::string& where);

// Reads a comma-separated dataset with a header line. Columns are
// matched by name: time, status, group are required, entry is optional
// (default 0); other columns are ignored. Errors carry 1-based line
// numbers.
std::vector<Observation> parse_dataset(std::istream& in, const std::string& name);
std::vector<Observation> read_dataset(const std::string& path);

// Writes cumulative incidence estimates as "group,time,estimate" rows,
// one leading time-0 row per group, then one row per jump. Re-parsing
// the rows reproduces the step functions exactly.
void write_estimates_csv(std::ostream& out, const std::vector<EstimatorOutput>& curves);

// Parses the output of write_estimates_csv back into per-group step
// functions (used for round-trip checks and replotting).
std::vector<std::pair<int, StepFunction>> parse_estimates_csv(std::istream& in,
                                                              const std::string& name);

}  // namespace ciftest
