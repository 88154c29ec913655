#pragma once

#include <string>
#include <vector>

namespace roughwave {
namespace cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  /// Markers only, no connecting line.
  bool points = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

/// Standalone SVG with axes, ticks and a legend. Non-finite points and, on
/// log axes, non-positive ones are skipped.
std::string RenderSvg(const Plot& plot);

}  // namespace cli
}  // namespace roughwave
