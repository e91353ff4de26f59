// src/chart.cpp

#include "bingo/chart.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bingo {
namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 30;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double x_of(const MetricsRecord& r, ChartAxis axis) {
  switch (axis) {
    case ChartAxis::S: return static_cast<double>(r.S);
    case ChartAxis::B: return static_cast<double>(r.B);
    case ChartAxis::Alpha: return r.alpha;
  }
  return 0.0;
}

const char* axis_title(ChartAxis axis) {
  switch (axis) {
    case ChartAxis::S: return "Cache capacity S (files)";
    case ChartAxis::B: return "Batch size B (active sessions)";
    case ChartAxis::Alpha: return "Zipf exponent alpha";
  }
  return "";
}

}  // namespace

ChartAxis parse_chart_axis(std::string_view name) {
  if (name == "S") return ChartAxis::S;
  if (name == "B") return ChartAxis::B;
  if (name == "alpha") return ChartAxis::Alpha;
  throw std::invalid_argument("chart axis must be S, B or alpha");
}

std::string emit_chart(const std::vector<MetricsRecord>& rows, ChartAxis axis) {
  if (rows.empty()) throw std::invalid_argument("chart: no metrics rows");

  std::vector<std::string> policies;
  std::map<std::string, std::map<double, std::pair<double, int>>> sums;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) {
      policies.push_back(r.policy);
    }
    auto& cell = sums[r.policy][x_of(r, axis)];
    cell.first += r.hit_ratio;
    cell.second += 1;
  }
  if (policies.empty()) throw std::invalid_argument("chart: every row carries an error");

  double xmin = 0, xmax = 0;
  bool first = true;
  for (const auto& [policy, series] : sums) {
    for (const auto& [x, acc] : series) {
      xmin = first ? x : std::min(xmin, x);
      xmax = first ? x : std::max(xmax, x);
      first = false;
    }
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    if (xmax == xmin) return kLeft + plot_w / 2;
    return kLeft + (x - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Grid and y ticks.
  for (int k = 0; k <= 5; ++k) {
    const double y = k / 5.0;
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(py(y))
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\">" << label(y) << "</text>\n";
  }
  std::vector<double> xs;
  for (const auto& [policy, series] : sums) {
    for (const auto& [x, acc] : series) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) {
    svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
        << num(px(x)) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\">" << label(x) << "</text>\n";
  }

  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
      << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">" << axis_title(axis) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(kTop + plot_h / 2)
      << ")\">Hit ratio</text>\n";

  for (std::size_t i = 0; i < policies.size(); ++i) {
    const auto& policy = policies[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::ostringstream points;
    for (const auto& [x, acc] : sums[policy]) {
      if (points.tellp() > 0) points << ' ';
      points << num(px(x)) << ',' << num(py(acc.first / acc.second));
    }
    svg << "<polyline class=\"series\" data-policy=\"" << policy << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\" points=\"" << points.str() << "\"/>\n";
    for (const auto& [x, acc] : sums[policy]) {
      svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(acc.first / acc.second))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    const double lx = kLeft + plot_w + 20;
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\">" << policy
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bingo
