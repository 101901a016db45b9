#pragma once

#include <span>
#include <string>
#include <vector>

namespace logguard {

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Multi-series line chart over the episode index. Long series are thinned to
/// at most `max_points` vertices per line.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           std::span<const Series> series, std::size_t max_points = 1000);

/// Grouped bar chart: one group per category, one bar per series.
/// series[i].values[j] is the height for category j.
std::string svg_bar_chart(const std::string& title, std::span<const std::string> categories,
                          std::span<const Series> series);

}  // namespace logguard
