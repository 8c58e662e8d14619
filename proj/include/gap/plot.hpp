#pragma once

#include "gap/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gap {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool line = false;  // polyline instead of markers
  bool dashed = false;
};

/// Log-log chart; points with non-positive coordinates are skipped.
void write_loglog_svg(std::ostream& os, const std::vector<SvgSeries>& series,
                      const std::string& x_label, const std::string& y_label);

/// Iterations against theta_F per method, with the theoretical
/// gamma^k = tol curves of GAP_STAR, DR and MAP overlaid.
void plot_iterations(std::ostream& os, const std::vector<ResultRow>& rows,
                     double tol = 1e-8);

/// Expected iterations against theta_F for each method of a rates table.
void plot_rates(std::ostream& os, const std::vector<RateEntry>& rows);

}  // namespace gap
