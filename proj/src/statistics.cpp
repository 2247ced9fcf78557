#include "ciftest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ciftest/errors.hpp"

namespace ciftest {

void validate_window(const Window& w) {
  if (!std::isfinite(w.t1) || !std::isfinite(w.t2)) {
    throw ValidationError("window: endpoints must be finite");
  }
  if (w.t1 < 0.0) {
    throw ValidationError("window: t1 must be nonnegative");
  }
  if (!(w.t1 < w.t2)) {
    throw ValidationError("window: t1 must be strictly before t2");
  }
}

std::string to_string(StatKind kind) {
  switch (kind) {
    case StatKind::abc: return "abc";
    case StatKind::ks: return "ks";
    case StatKind::cvm: return "cvm";
    case StatKind::pepe: return "pepe";
    case StatKind::zabc: return "zabc";
  }
  return "?";
}

StatKind stat_kind_from_string(const std::string& name) {
  if (name == "abc") return StatKind::abc;
  if (name == "ks") return StatKind::ks;
  if (name == "cvm") return StatKind::cvm;
  if (name == "pepe") return StatKind::pepe;
  if (name == "zabc") return StatKind::zabc;
  throw ConfigError("unknown statistic '" + name +
                    "'; expected one of abc, ks, cvm, pepe, zabc");
}

std::vector<double> merged_grid(const StepFunction& f, const StepFunction& g,
                                const Window& w) {
  validate_window(w);
  std::vector<double> grid;
  grid.reserve(f.jump_count() + g.jump_count() + 2);
  grid.push_back(w.t1);
  auto add_inside = [&](std::span<const double> times) {
    for (double t : times) {
      if (t > w.t1 && t < w.t2) grid.push_back(t);
    }
  };
  add_inside(f.jump_times());
  add_inside(g.jump_times());
  grid.push_back(w.t2);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double step_functional(StatKind kind, std::span<const double> grid,
                       std::span<const double> curve) {
  if (grid.size() != curve.size() || grid.empty()) {
    throw ValidationError("step functional: grid and curve sizes differ");
  }
  if (kind == StatKind::ks) {
    double sup = 0.0;
    for (double v : curve) sup = std::max(sup, std::fabs(v));
    return sup;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double width = grid[i + 1] - grid[i];
    switch (kind) {
      case StatKind::abc: acc += std::fabs(curve[i]) * width; break;
      case StatKind::cvm: acc += curve[i] * curve[i] * width; break;
      case StatKind::pepe: acc += curve[i] * width; break;
      default:
        throw ValidationError("step functional: unsupported statistic kind");
    }
  }
  return acc;
}

namespace {

std::vector<double> sample_on_grid(const StepFunction& f,
                                   std::span<const double> grid) {
  std::vector<double> out(grid.size());
  const auto times = f.jump_times();
  const auto values = f.values_after();
  std::size_t j = 0;
  double current = f.initial_value();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (j < times.size() && times[j] <= grid[i]) {
      current = values[j];
      ++j;
    }
    out[i] = current;
  }
  return out;
}

StatisticValue two_sample_statistic(StatKind kind, const StepFunction& cif1,
                                    const StepFunction& cif2, const Window& w,
                                    std::size_t n1, std::size_t n2) {
  const auto grid = merged_grid(cif1, cif2, w);
  const auto v1 = sample_on_grid(cif1, grid);
  const auto v2 = sample_on_grid(cif2, grid);
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = v1[i] - v2[i];
  const double n = static_cast<double>(n1 + n2);
  const double scale = (kind == StatKind::cvm) ? n : std::sqrt(n);
  return {kind, scale * step_functional(kind, grid, diff), w, n1, n2};
}

}  // namespace

StatisticValue abc_statistic(const StepFunction& cif1, const StepFunction& cif2,
                             const Window& w, std::size_t n1, std::size_t n2) {
  return two_sample_statistic(StatKind::abc, cif1, cif2, w, n1, n2);
}

StatisticValue ks_statistic(const StepFunction& cif1, const StepFunction& cif2,
                            const Window& w, std::size_t n1, std::size_t n2) {
  return two_sample_statistic(StatKind::ks, cif1, cif2, w, n1, n2);
}

StatisticValue cvm_statistic(const StepFunction& cif1, const StepFunction& cif2,
                             const Window& w, std::size_t n1, std::size_t n2) {
  return two_sample_statistic(StatKind::cvm, cif1, cif2, w, n1, n2);
}

StatisticValue pepe_statistic(const StepFunction& cif1, const StepFunction& cif2,
                              const Window& w, std::size_t n1, std::size_t n2) {
  return two_sample_statistic(StatKind::pepe, cif1, cif2, w, n1, n2);
}

StatisticValue zabc_statistic(double t_abc, std::span<const double> replicates,
                              const Window& w, std::size_t n1, std::size_t n2) {
  if (replicates.size() < 2) {
    throw NumericError("standardized area statistic needs at least 2 replicates");
  }
  const double sd = sample_sd(replicates);
  if (!(sd > 0.0)) {
    throw NumericError("standardized area statistic: replicate variance is zero");
  }
  const double z = (t_abc - sample_mean(replicates)) / sd;
  return {StatKind::zabc, z, w, n1, n2};
}

double sample_mean(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  const double mean = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double sample_skewness(std::span<const double> x) {
  const double mean = sample_mean(x);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("normal quantile: p must lie in (0, 1)");
  }
  // Rational approximation (Acklam), then one Halley refinement step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

}  // namespace ciftest
