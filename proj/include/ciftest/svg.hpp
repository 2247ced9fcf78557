#pragma once

#include <string>
#include <vector>

#include "ciftest/step_function.hpp"

namespace ciftest {

// Minimal static SVG plots: step curves for estimates and bars for
// rejection rates. Output is deterministic.

struct StepSeries {
  std::string label;
  StepFunction curve;
};

void write_step_plot(const std::string& path, const std::string& title,
                     const std::vector<StepSeries>& series, double x_max);

struct Bar {
  std::string label;
  double value = 0.0;
};

void write_bar_plot(const std::string& path, const std::string& title,
                    const std::vector<Bar>& bars);

}  // namespace ciftest
