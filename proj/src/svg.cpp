#include "crowd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crowd/errors.hpp"

namespace crowd {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 72;
constexpr int kMarginR = 160;  // leaves room for the legend
constexpr int kMarginT = 48;
constexpr int kMarginB = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '&': r += "&amp;"; break;
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      default: r += c;
    }
  }
  return r;
}

// 1/2/5 ladder step covering the span with about n intervals
double nice_step(double span, int n) {
  double raw = span / n;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double step = (frac <= 1.0) ? 1.0 : (frac <= 2.0) ? 2.0 : (frac <= 5.0) ? 5.0 : 10.0;
  return step * mag;
}

struct LinScale {
  double lo, hi, a, b;  // pixel = a * value + b

  LinScale(double lo_, double hi_, double p0, double p1) : lo(lo_), hi(hi_) {
    a = (p1 - p0) / (hi - lo);
    b = p0 - a * lo;
  }
  double operator()(double v) const { return a * v + b; }
};

}  // namespace

std::string render_plot_svg(const std::vector<Series>& series, const AxesSpec& axes) {
  if (series.empty()) throw ConfigError("no series to plot");
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.pts.empty()) throw ConfigError("series '" + s.name + "' is empty");
    for (auto [x, y] : s.pts) {
      if (first) {
        xlo = xhi = x;
        ylo = yhi = y;
        first = false;
      }
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (axes.bars) ylo = std::min(ylo, 0.0);
  if (xhi - xlo < 1e-12) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  if (yhi - ylo < 1e-12) {
    ylo -= 0.5;
    yhi += 0.5;
  }
  double ypad = 0.06 * (yhi - ylo);
  ylo -= ypad;
  yhi += ypad;
  double xpad = axes.bars ? 0.5 : 0.04 * (xhi - xlo);
  xlo -= xpad;
  xhi += xpad;

  LinScale sx(xlo, xhi, kMarginL, kWidth - kMarginR);
  LinScale sy(ylo, yhi, kHeight - kMarginB, kMarginT);

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << (kMarginL + (kWidth - kMarginR - kMarginL) / 2) << "\" y=\"28\" "
    << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << escape(axes.title)
    << "</text>\n";

  // frame
  o << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
    << (kWidth - kMarginR - kMarginL) << "\" height=\"" << (kHeight - kMarginT - kMarginB)
    << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  auto ticks = [&o](const LinScale& s, bool horizontal) {
    double step = nice_step(s.hi - s.lo, 5);
    double t0 = std::ceil(s.lo / step) * step;
    for (double t = t0; t <= s.hi + 1e-9 * step; t += step) {
      double v = (std::abs(t) < 1e-12 * step) ? 0.0 : t;
      double p = s(v);
      if (horizontal) {
        o << "<line x1=\"" << num(p) << "\" y1=\"" << (kHeight - kMarginB) << "\" x2=\"" << num(p)
          << "\" y2=\"" << (kHeight - kMarginB + 5) << "\" stroke=\"#333333\"/>\n";
        o << "<text x=\"" << num(p) << "\" y=\"" << (kHeight - kMarginB + 20)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
          << tick_label(v) << "</text>\n";
      } else {
        o << "<line x1=\"" << (kMarginL - 5) << "\" y1=\"" << num(p) << "\" x2=\"" << kMarginL
          << "\" y2=\"" << num(p) << "\" stroke=\"#333333\"/>\n";
        o << "<text x=\"" << (kMarginL - 8) << "\" y=\"" << num(p + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(v)
          << "</text>\n";
      }
    }
  };
  ticks(sx, true);
  ticks(sy, false);

  o << "<text x=\"" << (kMarginL + (kWidth - kMarginR - kMarginL) / 2) << "\" y=\""
    << (kHeight - 14)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << escape(axes.x_label) << "</text>\n";
  o << "<text x=\"20\" y=\"" << (kMarginT + (kHeight - kMarginT - kMarginB) / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
    << "transform=\"rotate(-90 20 " << (kMarginT + (kHeight - kMarginT - kMarginB) / 2) << ")\">"
    << escape(axes.y_label) << "</text>\n";

  if (axes.bars) {
    // bars of one x position sit side by side around it
    size_t groups = series.size();
    double slot = 0.8 / static_cast<double>(groups);
    double y0 = sy(std::max(0.0, ylo));
    for (size_t g = 0; g < groups; ++g) {
      const char* color = kPalette[g % kPaletteSize];
      for (auto [x, y] : series[g].pts) {
        double x0 = sx(x - 0.4 + g * slot);
        double x1 = sx(x - 0.4 + (g + 1) * slot);
        double yp = sy(y);
        double top = std::min(yp, y0);
        double h = std::abs(y0 - yp);
        o << "<rect x=\"" << num(x0) << "\" y=\"" << num(top) << "\" width=\"" << num(x1 - x0)
          << "\" height=\"" << num(h) << "\" fill=\"" << color << "\"/>\n";
      }
    }
  } else {
    for (size_t g = 0; g < series.size(); ++g) {
      const char* color = kPalette[g % kPaletteSize];
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (size_t k = 0; k < series[g].pts.size(); ++k) {
        if (k) o << ' ';
        o << num(sx(series[g].pts[k].first)) << ',' << num(sy(series[g].pts[k].second));
      }
      o << "\"/>\n";
      for (auto [x, y] : series[g].pts)
        o << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    }
  }

  int ly = kMarginT + 10;
  for (size_t g = 0; g < series.size(); ++g) {
    const char* color = kPalette[g % kPaletteSize];
    o << "<rect x=\"" << (kWidth - kMarginR + 16) << "\" y=\"" << (ly - 9)
      << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    o << "<text x=\"" << (kWidth - kMarginR + 34) << "\" y=\"" << (ly + 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[g].name)
      << "</text>\n";
    ly += 20;
  }

  o << "</svg>\n";
  return o.str();
}

void emit_plot_svg(const std::vector<Series>& series, const AxesSpec& axes,
                   const std::string& path) {
  std::string body = render_plot_svg(series, axes);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << body;
  if (!out) throw ConfigError("short write to " + path);
}

}  // namespace crowd
