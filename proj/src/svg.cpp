#include "ciftest/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "ciftest/errors.hpp"

namespace ciftest {

namespace {

constexpr double width = 760.0;
constexpr double height = 480.0;
constexpr double margin_left = 70.0;
constexpr double margin_right = 30.0;
constexpr double margin_top = 50.0;
constexpr double margin_bottom = 60.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void open_svg(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void axes(std::ofstream& out, double x0, double x1, double y0, double y1,
          auto x_of, auto y_of) {
  out << "<line x1=\"" << num(x_of(x0)) << "\" y1=\"" << num(y_of(y0)) << "\" x2=\""
      << num(x_of(x1)) << "\" y2=\"" << num(y_of(y0)) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(x_of(x0)) << "\" y1=\"" << num(y_of(y0)) << "\" x2=\""
      << num(x_of(x0)) << "\" y2=\"" << num(y_of(y1)) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xf = x0 + (x1 - x0) * i / 5.0;
    const double yf = y0 + (y1 - y0) * i / 5.0;
    out << "<text x=\"" << num(x_of(xf)) << "\" y=\"" << num(y_of(y0) + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(xf) << "</text>\n";
    out << "<text x=\"" << num(x_of(x0) - 8) << "\" y=\"" << num(y_of(yf) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(yf) << "</text>\n";
    out << "<line x1=\"" << num(x_of(x0)) << "\" y1=\"" << num(y_of(yf)) << "\" x2=\""
        << num(x_of(x1)) << "\" y2=\"" << num(y_of(yf))
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
}

}  // namespace

void write_step_plot(const std::string& path, const std::string& title,
                     const std::vector<StepSeries>& series, double x_max) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open plot file '" + path + "'");

  double y_max = 0.0;
  for (const StepSeries& s : series) {
    y_max = std::max(y_max, s.curve.initial_value());
    for (double v : s.curve.values_after()) y_max = std::max(y_max, v);
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  auto x_of = [&](double x) {
    return margin_left + (width - margin_left - margin_right) * (x / x_max);
  };
  auto y_of = [&](double y) {
    return height - margin_bottom -
           (height - margin_top - margin_bottom) * (y / y_max);
  };

  open_svg(out, title);
  axes(out, 0.0, x_max, 0.0, y_max, x_of, y_of);

  for (std::size_t s = 0; s < series.size(); ++s) {
    const StepFunction& f = series[s].curve;
    const char* color = palette[s % 6];
    std::string d = "M " + num(x_of(0.0)) + " " + num(y_of(f.initial_value()));
    const auto times = f.jump_times();
    const auto values = f.values_after();
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] > x_max) break;
      d += " H " + num(x_of(times[i]));
      d += " V " + num(y_of(values[i]));
    }
    d += " H " + num(x_of(x_max));
    out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << num(margin_left + 12) << "\" y=\""
        << num(margin_top + 16.0 * static_cast<double>(s))
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_bar_plot(const std::string& path, const std::string& title,
                    const std::vector<Bar>& bars) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open plot file '" + path + "'");

  double y_max = 0.0;
  for (const Bar& bar : bars) y_max = std::max(y_max, bar.value);
  if (y_max <= 0.0) y_max = 1.0;
  y_max = std::min(1.0, y_max * 1.15);

  auto y_of = [&](double y) {
    return height - margin_bottom -
           (height - margin_top - margin_bottom) * (y / y_max);
  };

  open_svg(out, title);
  const double plot_w = width - margin_left - margin_right;
  const double slot = plot_w / static_cast<double>(bars.size());
  out << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(y_of(0.0))
      << "\" x2=\"" << num(width - margin_right) << "\" y2=\"" << num(y_of(0.0))
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yf = y_max * i / 5.0;
    out << "<text x=\"" << num(margin_left - 8) << "\" y=\"" << num(y_of(yf) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(yf) << "</text>\n";
  }
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = margin_left + slot * (static_cast<double>(i) + 0.2);
    const double w = slot * 0.6;
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y_of(bars[i].value))
        << "\" width=\"" << num(w) << "\" height=\""
        << num(y_of(0.0) - y_of(bars[i].value)) << "\" fill=\"" << palette[0]
        << "\"/>\n";
    out << "<text x=\"" << num(x + w / 2) << "\" y=\"" << num(y_of(0.0) + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << bars[i].label << "</text>\n";
    out << "<text x=\"" << num(x + w / 2) << "\" y=\""
        << num(y_of(bars[i].value) - 4)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << tick_label(bars[i].value) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ciftest
