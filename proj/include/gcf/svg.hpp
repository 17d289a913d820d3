#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

/// Minimal SVG line-plot emitter: polylines, optional log axes, decade or
/// linear ticks, series labels. Enough to eyeball curvature histories and
/// profile decays without an external plotting stack.
class SvgPlot {
 public:
  SvgPlot(std::string title, bool log_x, bool log_y)
      : title_(std::move(title)), log_x_(log_x), log_y_(log_y) {}

  void add_series(std::string label, std::vector<double> x,
                  std::vector<double> y) {
    Series s;
    s.label = std::move(label);
    for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
      if (log_x_ && !(x[i] > 0.0)) continue;
      if (log_y_ && !(y[i] > 0.0)) continue;
      s.x.push_back(log_x_ ? std::log10(x[i]) : x[i]);
      s.y.push_back(log_y_ ? std::log10(y[i]) : y[i]);
    }
    if (!s.x.empty()) series_.push_back(std::move(s));
  }

  std::string render() const {
    const double W = 760, H = 520, ml = 70, mr = 20, mt = 40, mb = 50;
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    bool first = true;
    for (const auto& s : series_)
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (first) {
          xlo = xhi = s.x[i];
          ylo = yhi = s.y[i];
          first = false;
        }
        xlo = std::min(xlo, s.x[i]);
        xhi = std::max(xhi, s.x[i]);
        ylo = std::min(ylo, s.y[i]);
        yhi = std::max(yhi, s.y[i]);
      }
    if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                  "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  W, H, W, H);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"24\" font-size=\"16\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  ml, title_.c_str());
    out += buf;

    // frame
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                  "fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, W - ml - mr, H - mt - mb);
    out += buf;

    // ticks: decades on log axes, 5 linear ticks otherwise
    auto tick_values = [](double lo, double hi, bool log_axis) {
      std::vector<double> v;
      if (log_axis) {
        for (int d = static_cast<int>(std::ceil(lo));
             d <= static_cast<int>(std::floor(hi)); ++d)
          v.push_back(d);
        if (v.empty()) v = {lo, hi};
      } else {
        for (int i = 0; i <= 4; ++i) v.push_back(lo + (hi - lo) * i / 4.0);
      }
      return v;
    };
    for (double t : tick_values(xlo, xhi, log_x_)) {
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                    "stroke=\"black\"/>\n",
                    px(t), H - mb, px(t), H - mb + 5);
      out += buf;
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%g\" y=\"%g\" font-size=\"11\" "
                    "font-family=\"sans-serif\" text-anchor=\"middle\">%s</text>\n",
                    px(t), H - mb + 18, format_tick(t, log_x_).c_str());
      out += buf;
    }
    for (double t : tick_values(ylo, yhi, log_y_)) {
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                    "stroke=\"black\"/>\n",
                    ml - 5, py(t), ml, py(t));
      out += buf;
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%g\" y=\"%g\" font-size=\"11\" "
                    "font-family=\"sans-serif\" text-anchor=\"end\">%s</text>\n",
                    ml - 8, py(t) + 4, format_tick(t, log_y_).c_str());
      out += buf;
    }

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
    for (size_t k = 0; k < series_.size(); ++k) {
      const auto& s = series_[k];
      out += "<polyline fill=\"none\" stroke=\"";
      out += colors[k % 6];
      out += "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < s.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
        out += buf;
      }
      out += "\"/>\n";
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                    "font-family=\"sans-serif\" fill=\"%s\">%s</text>\n",
                    W - mr - 150.0, mt + 16.0 * (k + 1), colors[k % 6],
                    s.label.c_str());
      out += buf;
    }
    out += "</svg>\n";
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw PipelineError("cannot write " + path);
    f << render();
  }

 private:
  struct Series {
    std::string label;
    std::vector<double> x, y;
  };

  static std::string format_tick(double t, bool log_axis) {
    char buf[48];
    if (log_axis)
      std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(t)));
    else
      std::snprintf(buf, sizeof buf, "%.3g", t);
    return buf;
  }

  std::string title_;
  bool log_x_, log_y_;
  std::vector<Series> series_;
};

}  // namespace gcf
