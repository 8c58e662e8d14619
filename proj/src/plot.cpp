#include "gap/plot.hpp"

#include "gap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace gap {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 560;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 30;
constexpr double kBottom = 60;

const char* palette(std::size_t i) {
  static const char* colors[] = {"#4d4dff", "#ffb300", "#ff0000", "#00bf00",
                                 "#4d0099", "#00cccc", "#999999", "#aa5500"};
  return colors[i % (sizeof colors / sizeof *colors)];
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_loglog_svg(std::ostream& os, const std::vector<SvgSeries>& series,
                      const std::string& x_label, const std::string& y_label) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (x <= 0.0 || y <= 0.0) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > 0.0)) {
    xmin = 1.0;
    xmax = 10.0;
    ymin = 1.0;
    ymax = 10.0;
  }
  const double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax) + 1e-12);
  const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax) + 1e-12);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (std::log10(x) - lx0) / std::max(lx1 - lx0, 1.0) * pw; };
  auto py = [&](double y) { return kTop + ph - (std::log10(y) - ly0) / std::max(ly1 - ly0, 1.0) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = lx0; e <= lx1; e += 1.0) {
    const double x = px(std::pow(10.0, e));
    os << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e"
       << static_cast<int>(e) << "</text>\n";
  }
  for (double e = ly0; e <= ly1; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
       << static_cast<int>(e) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << esc(x_label) << "</text>\n";
  os << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << esc(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
         << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
      for (auto [x, y] : s.points) {
        if (x > 0.0 && y > 0.0) os << px(x) << ',' << py(y) << ' ';
      }
      os << "\"/>\n";
    } else {
      for (auto [x, y] : s.points) {
        if (x > 0.0 && y > 0.0) {
          os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2\" fill=\"" << s.color
             << "\" fill-opacity=\"0.7\"/>\n";
        }
      }
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    os << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\""
       << s.color << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly + 1 << "\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

void plot_iterations(std::ostream& os, const std::vector<ResultRow>& rows, double tol) {
  std::vector<std::string> order;
  std::map<std::string, SvgSeries> by_method;
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (const auto& r : rows) {
    if (!by_method.count(r.method)) {
      order.push_back(r.method);
      by_method[r.method] = SvgSeries{r.method, palette(order.size() - 1), {}};
    }
    by_method[r.method].points.emplace_back(r.theta_f, static_cast<double>(r.iterations));
    tmin = std::min(tmin, r.theta_f);
    tmax = std::max(tmax, r.theta_f);
  }
  std::vector<SvgSeries> series;
  for (const auto& name : order) series.push_back(by_method[name]);

  if (tmax > 0.0) {
    const Method theory[] = {Method{MethodKind::GapStar, 0.0}, Method{MethodKind::DR, 0.0},
                             Method{MethodKind::MapOpt, 0.0}};
    for (std::size_t i = 0; i < 3; ++i) {
      SvgSeries line{theory[i].name() + " theory", palette(i == 0 ? 0 : (i == 1 ? 3 : 4)), {}, true, false};
      const int samples = 200;
      for (int k = 0; k <= samples; ++k) {
        const double t = tmin * std::pow(tmax / tmin, static_cast<double>(k) / samples);
        const double g = theoretical_rate(theory[i], t);
        if (g < 1.0) line.points.emplace_back(t, static_cast<double>(expected_iterations(g, tol)));
      }
      series.push_back(std::move(line));
    }
  }
  write_loglog_svg(os, series, "Friedrichs angle theta_F", "Iterations");
}

void plot_rates(std::ostream& os, const std::vector<RateEntry>& rows) {
  std::vector<std::string> order;
  std::map<std::string, SvgSeries> by_method;
  for (const auto& e : rows) {
    if (!by_method.count(e.method)) {
      order.push_back(e.method);
      by_method[e.method] = SvgSeries{e.method, palette(order.size() - 1), {}, true, false};
    }
    if (e.expected_iterations) {
      by_method[e.method].points.emplace_back(e.theta_f, static_cast<double>(*e.expected_iterations));
    }
  }
  std::vector<SvgSeries> series;
  for (const auto& name : order) series.push_back(by_method[name]);
  write_loglog_svg(os, series, "Friedrichs angle theta_F", "Expected iterations");
}

}  // namespace gap
