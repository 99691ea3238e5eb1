#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "pscom/experiments.hpp"

namespace pscom {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kYTicks = 5;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string axis_label(SweepParameter p) {
  switch (p) {
    case SweepParameter::PMax: return "Maximum power P_max (W)";
    case SweepParameter::NUsers: return "Number of users N";
    case SweepParameter::NoisePower: return "Noise power (dBm)";
  }
  return "";
}

struct Series {
  Method method;
  std::vector<std::pair<double, double>> points;
};

}  // namespace

std::string render_svg(const ResultTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("plot: empty result table");
  if (!table.sweep_param) throw std::invalid_argument("plot: table does not come from a sweep");

  std::vector<Series> series;
  for (const ResultRow& row : table.rows) {
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.method == row.report.method; });
    if (it == series.end()) {
      series.push_back({row.report.method, {}});
      it = std::prev(series.end());
    }
    it->points.emplace_back(row.sweep_value, row.report.tau_bps());
  }

  double x_min = table.rows.front().sweep_value, x_max = x_min;
  double y_min = table.rows.front().report.tau_bps(), y_max = y_min;
  for (const ResultRow& row : table.rows) {
    x_min = std::min(x_min, row.sweep_value);
    x_max = std::max(x_max, row.sweep_value);
    y_min = std::min(y_min, row.report.tau_bps());
    y_max = std::max(y_max, row.report.tau_bps());
  }
  if (x_max == x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max == y_min) {
    const double pad = y_max == 0.0 ? 1.0 : 0.05 * std::abs(y_max);
    y_min -= pad;
    y_max += pad;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + axis_label(*table.sweep_param) + " vs. minimum equivalent rate</text>\n";

  // Axes.
  svg += "<line class=\"axis\" x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" +
         fixed(kLeft + plot_w) + "\" y2=\"" + fixed(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line class=\"axis\" x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + fixed(kLeft) +
         "\" y2=\"" + fixed(kTop + plot_h) + "\" stroke=\"black\"/>\n";

  std::vector<double> xs;
  for (const ResultRow& row : table.rows) {
    if (std::find(xs.begin(), xs.end(), row.sweep_value) == xs.end()) xs.push_back(row.sweep_value);
  }
  for (double x : xs) {
    svg += "<line x1=\"" + fixed(px(x)) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" + fixed(px(x)) + "\" y2=\"" +
           fixed(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(px(x)) + "\" y=\"" + fixed(kTop + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + short_num(x) + "</text>\n";
  }
  for (int t = 0; t <= kYTicks; ++t) {
    const double y = y_min + (y_max - y_min) * t / kYTicks;
    svg += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(py(y)) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
           fixed(py(y)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(py(y) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + short_num(y) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + axis_label(*table.sweep_param) +
         "</text>\n";
  svg += "<text x=\"20\" y=\"" + fixed(kTop + plot_h / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 " + fixed(kTop + plot_h / 2) + ")\">tau (bit/s)</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!pts.empty()) pts += ' ';
      pts += fixed(px(x)) + "," + fixed(py(y));
    }
    svg += "<polyline class=\"series\" data-method=\"" + to_string(series[i].method) + "\" points=\"" + pts +
           "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    const double ly = kTop + 20.0 * static_cast<double>(i) + 10.0;
    const double lx = kLeft + plot_w + 15.0;
    svg += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 25) + "\" y2=\"" + fixed(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(lx + 32) + "\" y=\"" + fixed(ly + 4) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
           to_string(series[i].method) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace pscom
