#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucp/stats.hpp"

namespace ucp::cli {

struct HistogramBins {
  double low = 0.0;
  double width = 0.0;
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; the maximum lands in the last bin.
HistogramBins histogram(std::span<const double> values, std::size_t bins);

std::string histogram_svg(const HistogramBins& bins, std::string_view title, std::string_view x_label);

// Mean marker with a 95% CI whisker per level; levels without a defined CI
// get a hollow marker and no whisker.
std::string interval_plot_svg(std::span<const stats::IntervalSummary> levels, std::string_view title);

std::string bar_chart_svg(std::span<const std::string> labels, std::span<const double> values, std::string_view title);

}  // namespace ucp::cli
