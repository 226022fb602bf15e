#include "aicn/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace aicn {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr const char* kDashes[] = {"", "7,3", "2,2", "9,3,2,3"};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
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

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0;  // in plot space (log10 when logarithmic)
  double hi = 1.0;
  bool log = false;

  double to_unit(double v) const {
    const double t = log ? std::log10(v) : v;
    return (t - lo) / (hi - lo);
  }
};

// Tick positions in plot space plus their data-space labels.
std::vector<std::pair<double, std::string>> make_ticks(const Axis& ax) {
  std::vector<std::pair<double, std::string>> ticks;
  const double span = ax.hi - ax.lo;
  if (ax.log && span >= 1.0) {
    const int first = static_cast<int>(std::ceil(ax.lo - 1e-9));
    const int last = static_cast<int>(std::floor(ax.hi + 1e-9));
    const int step = std::max(1, (last - first) / 8 + ((last - first) % 8 ? 1 : 0));
    for (int e = first; e <= last; e += step) {
      ticks.emplace_back(static_cast<double>(e), "1e" + std::to_string(e));
    }
    return ticks;
  }
  // Linear ladder with a 1/2/5 step; also used for sub-decade log ranges.
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(std::max(raw, 1e-300))));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const double start = std::ceil(ax.lo / step) * step;
  for (double t = start; t <= ax.hi + 0.5 * step; t += step) {
    ticks.emplace_back(t, fmt(ax.log ? std::pow(10.0, t) : t));
  }
  return ticks;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  const double ml = 74, mr = 18, mt = 34, mb = 48;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  const auto usable = [&](double v, bool log_axis) {
    return std::isfinite(v) && (!log_axis || v > 0.0);
  };

  Axis xa{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          spec.log_x};
  Axis ya{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          spec.log_y};
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], spec.log_x) || !usable(s.y[i], spec.log_y)) continue;
      const double tx = spec.log_x ? std::log10(s.x[i]) : s.x[i];
      const double ty = spec.log_y ? std::log10(s.y[i]) : s.y[i];
      xa.lo = std::min(xa.lo, tx);
      xa.hi = std::max(xa.hi, tx);
      ya.lo = std::min(ya.lo, ty);
      ya.hi = std::max(ya.hi, ty);
    }
  }
  if (!(xa.lo <= xa.hi)) xa = Axis{0.0, 1.0, spec.log_x};
  if (!(ya.lo <= ya.hi)) ya = Axis{0.0, 1.0, spec.log_y};
  const auto pad = [](Axis& a) {
    double w = a.hi - a.lo;
    if (w <= 0.0) w = std::max(std::abs(a.lo), 1.0);
    a.lo -= 0.05 * w;
    a.hi += 0.05 * w;
  };
  pad(xa);
  pad(ya);

  const auto px = [&](double unit) { return ml + unit * pw; };
  const auto py = [&](double unit) { return mt + (1.0 - unit) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << spec.width / 2.0 << "\" y=\"20\" font-size=\"15\" "
      << "text-anchor=\"middle\">" << xml_escape(spec.title) << "</text>\n";

  for (const auto& [t, label] : make_ticks(xa)) {
    const double x = px(xa.to_unit(spec.log_x ? std::pow(10.0, t) : t));
    if (x < ml - 0.5 || x > ml + pw + 0.5) continue;
    svg << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
        << mt + ph << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << xml_escape(label) << "</text>\n";
  }
  for (const auto& [t, label] : make_ticks(ya)) {
    const double y = py(ya.to_unit(spec.log_y ? std::pow(10.0, t) : t));
    if (y < mt - 0.5 || y > mt + ph + 0.5) continue;
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << xml_escape(label) << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << ml + pw / 2.0 << "\" y=\"" << spec.height - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(spec.x_label)
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << mt + ph / 2.0 << "\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 16 " << mt + ph / 2.0 << ")\">" << xml_escape(spec.y_label)
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    std::ostringstream points;
    bool any = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], spec.log_x) || !usable(s.y[i], spec.log_y)) continue;
      points << px(xa.to_unit(s.x[i])) << ',' << py(ya.to_unit(s.y[i])) << ' ';
      any = true;
    }
    if (!any) continue;
    const char* color = kColors[si % (sizeof kColors / sizeof *kColors)];
    const char* dash = kDashes[si % (sizeof kDashes / sizeof *kDashes)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.7\"";
    if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"" << points.str() << "\"/>\n";
  }

  // Legend, one row per series, top-right inside the plot area.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double y = mt + 14 + 16.0 * si;
    const char* color = kColors[si % (sizeof kColors / sizeof *kColors)];
    const char* dash = kDashes[si % (sizeof kDashes / sizeof *kDashes)];
    svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << y << "\" x2=\"" << ml + pw - 122
        << "\" y2=\"" << y << "\" stroke=\"" << color << "\" stroke-width=\"1.7\"";
    if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << ml + pw - 116 << "\" y=\"" << y + 4 << "\" font-size=\"11\">"
        << xml_escape(series[si].label) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace aicn
