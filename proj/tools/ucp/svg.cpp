#include "ucp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ucp/csv.hpp"
#include "ucp/error.hpp"

namespace ucp::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string f2(double v) { return format_fixed(v, 2); }

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double y_min;
  double y_max;

  double plot_w() const { return kWidth - kLeft - kRight; }
  double plot_h() const { return kHeight - kTop - kBottom; }
  double y(double v) const { return kTop + plot_h() * (1.0 - (v - y_min) / (y_max - y_min)); }
};

// Rounds the axis out to a "nice" step so tick labels stay short.
Frame make_frame(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

void open(std::ostringstream& s, std::string_view title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
    << "</text>\n";
}

void axes(std::ostringstream& s, const Frame& f, std::string_view y_label) {
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double yb = kTop + f.plot_h();
  s << "<line x1=\"" << x0 << "\" y1=\"" << kTop << "\" x2=\"" << x0 << "\" y2=\"" << yb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << x0 << "\" y1=\"" << yb << "\" x2=\"" << x1 << "\" y2=\"" << yb << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = f.y_min + (f.y_max - f.y_min) * t / 5.0;
    const double y = f.y(v);
    s << "<line x1=\"" << x0 - 4 << "\" y1=\"" << f2(y) << "\" x2=\"" << x0 << "\" y2=\"" << f2(y)
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << x0 - 7 << "\" y=\"" << f2(y + 4) << "\" text-anchor=\"end\">" << format_double(v)
      << "</text>\n";
  }
  s << "<text x=\"18\" y=\"" << kTop + f.plot_h() / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << kTop + f.plot_h() / 2 << ")\">" << escape(y_label) << "</text>\n";
}

void x_label(std::ostringstream& s, std::string_view label) {
  s << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\">" << escape(label) << "</text>\n";
}

}  // namespace

HistogramBins histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw Error("histogram: no values");
  if (bins == 0) throw Error("histogram: zero bins");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  HistogramBins out;
  out.counts.assign(bins, 0);
  out.low = *lo;
  out.width = (*hi - *lo) / static_cast<double>(bins);
  if (!(out.width > 0)) {
    out.low = *lo - 0.5;
    out.width = 1.0 / static_cast<double>(bins);
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - out.low) / out.width);
    out.counts[std::min(b, bins - 1)]++;
  }
  return out;
}

std::string histogram_svg(const HistogramBins& bins, std::string_view title, std::string_view label) {
  const std::size_t peak = bins.counts.empty() ? 1 : *std::max_element(bins.counts.begin(), bins.counts.end());
  const Frame f = make_frame(0.0, static_cast<double>(std::max<std::size_t>(peak, 1)));
  std::ostringstream s;
  open(s, title);
  axes(s, f, "Frequency");
  const double bw = f.plot_w() / static_cast<double>(bins.counts.size());
  for (std::size_t i = 0; i < bins.counts.size(); ++i) {
    const double x = kLeft + bw * static_cast<double>(i);
    const double y = f.y(static_cast<double>(bins.counts[i]));
    s << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" width=\"" << f2(bw) << "\" height=\""
      << f2(kTop + f.plot_h() - y) << "\" fill=\"#6a8fc7\" stroke=\"#23395d\"/>\n";
  }
  for (std::size_t i = 0; i <= bins.counts.size(); i += 2) {
    const double x = kLeft + bw * static_cast<double>(i);
    s << "<text x=\"" << f2(x) << "\" y=\"" << kTop + f.plot_h() + 16 << "\" text-anchor=\"middle\">"
      << format_fixed(bins.low + bins.width * static_cast<double>(i), 1) << "</text>\n";
  }
  x_label(s, label);
  s << "</svg>\n";
  return s.str();
}

std::string interval_plot_svg(std::span<const stats::IntervalSummary> levels, std::string_view title) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& l : levels) {
    lo = std::min({lo, l.mean, l.ci.defined ? l.ci.low : l.mean});
    hi = std::max({hi, l.mean, l.ci.defined ? l.ci.high : l.mean});
  }
  if (levels.empty()) lo = hi = 0.0;
  const Frame f = make_frame(lo, hi);
  std::ostringstream s;
  open(s, title);
  axes(s, f, "PDR (hours/UCP)");
  // Slots for all six raw levels so plots of different factors line up.
  const double slot = f.plot_w() / 6.0;
  for (int level = 0; level <= 5; ++level) {
    s << "<text x=\"" << f2(kLeft + slot * (level + 0.5)) << "\" y=\"" << kTop + f.plot_h() + 16
      << "\" text-anchor=\"middle\">" << level << "</text>\n";
  }
  for (const auto& l : levels) {
    const double x = kLeft + slot * (l.level + 0.5);
    if (l.ci.defined) {
      s << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(f.y(l.ci.low)) << "\" x2=\"" << f2(x) << "\" y2=\""
        << f2(f.y(l.ci.high)) << "\" stroke=\"#23395d\" stroke-width=\"2\"/>\n";
      for (double v : {l.ci.low, l.ci.high}) {
        s << "<line x1=\"" << f2(x - 10) << "\" y1=\"" << f2(f.y(v)) << "\" x2=\"" << f2(x + 10) << "\" y2=\""
          << f2(f.y(v)) << "\" stroke=\"#23395d\" stroke-width=\"2\"/>\n";
      }
    }
    s << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(f.y(l.mean)) << "\" r=\"5\" "
      << (l.ci.defined ? "fill=\"#c0392b\"" : "fill=\"white\" stroke=\"#c0392b\" stroke-width=\"2\"") << "/>\n";
    s << "<text x=\"" << f2(x + 8) << "\" y=\"" << f2(f.y(l.mean) - 8) << "\" font-size=\"10\">n=" << l.count
      << (l.ci.defined ? "" : " (no CI)") << "</text>\n";
  }
  x_label(s, "Level");
  s << "</svg>\n";
  return s.str();
}

std::string bar_chart_svg(std::span<const std::string> labels, std::span<const double> values,
                          std::string_view title) {
  if (labels.size() != values.size()) throw Error("bar chart: label/value count mismatch");
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  const Frame f = make_frame(0.0, std::max(hi, 1.0));
  std::ostringstream s;
  open(s, title);
  axes(s, f, "Projects");
  const double slot = f.plot_w() / static_cast<double>(std::max<std::size_t>(values.size(), 1));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kLeft + slot * static_cast<double>(i);
    const double y = f.y(values[i]);
    s << "<rect x=\"" << f2(x + slot * 0.15) << "\" y=\"" << f2(y) << "\" width=\"" << f2(slot * 0.7)
      << "\" height=\"" << f2(kTop + f.plot_h() - y) << "\" fill=\"#7fb77e\" stroke=\"#2e5e2d\"/>\n";
    s << "<text x=\"" << f2(x + slot / 2) << "\" y=\"" << f2(y - 5) << "\" text-anchor=\"middle\">"
      << format_double(values[i]) << "</text>\n";
    s << "<text x=\"" << f2(x + slot / 2) << "\" y=\"" << kTop + f.plot_h() + 16 << "\" text-anchor=\"middle\">"
      << escape(labels[i]) << "</text>\n";
  }
  x_label(s, "Level");
  s << "</svg>\n";
  return s.str();
}

}  // namespace ucp::cli
