// include/bingo/chart.hpp
//
// Renders mean hit ratio per policy against one sweep axis as a standalone
// SVG line chart.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bingo/harness.hpp"

namespace bingo {

enum class ChartAxis { S, B, Alpha };

/// Accepts "S", "B" or "alpha".
ChartAxis parse_chart_axis(std::string_view name);

/// One polyline (with point markers) per policy; y is the mean hit ratio
/// over all error-free rows sharing the policy and x value. Throws
/// std::invalid_argument when there is nothing to plot.
std::string emit_chart(const std::vector<MetricsRecord>& rows, ChartAxis axis);

}  // namespace bingo
