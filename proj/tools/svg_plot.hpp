#pragma once

#include <string>
#include <utility>
#include <vector>

namespace prent::cli {

struct series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Minimal line chart written as standalone SVG.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<series>& lines);

} // namespace prent::cli
