// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ganlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ganlab::svg {

namespace {

constexpr double kWidth = 560.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 48.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Canvas {
  std::string body;
  Range xr, yr;

  double px(double x) const {
    return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kMarginTop - kMarginBottom);
  }

  void frame(const std::string& title, const std::string& x_label,
             const std::string& y_label) {
    body += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) + "\" width=\"" +
            num(kWidth - kMarginLeft - kMarginRight) + "\" height=\"" +
            num(kHeight - kMarginTop - kMarginBottom) +
            "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    body += "<text x=\"" + num(kWidth / 2) +
            "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\" fill=\"#222222\">" +
            title + "</text>\n";
    if (!x_label.empty()) {
      body += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 10) +
              "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\">" + x_label +
              "</text>\n";
    }
    if (!y_label.empty()) {
      body += "<text x=\"16\" y=\"" + num(kHeight / 2) +
              "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\" transform=\"rotate(-90 16 " +
              num(kHeight / 2) + ")\">" + y_label + "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
      double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
      double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
      body += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kHeight - kMarginBottom + 16) +
              "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#444444\">" +
              tick_label(fx) + "</text>\n";
      body += "<text x=\"" + num(kMarginLeft - 6) + "\" y=\"" + num(py(fy) + 3) +
              "\" font-size=\"10\" text-anchor=\"end\" fill=\"#444444\">" +
              tick_label(fy) + "</text>\n";
    }
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kMarginTop + 14.0;
    for (const auto& [label, color] : entries) {
      if (label.empty()) continue;
      body += "<rect x=\"" + num(kMarginLeft + 8) + "\" y=\"" + num(y - 8) +
              "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
      body += "<text x=\"" + num(kMarginLeft + 22) + "\" y=\"" + num(y) +
              "\" font-size=\"11\" fill=\"#222222\">" + label + "</text>\n";
      y += 16.0;
    }
  }

  std::string finish() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
           "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
           num(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" +
           body + "</svg>\n";
  }
};

}  // namespace

std::string scatter_plot(const std::vector<PointSeries>& series,
                         const std::string& title) {
  Canvas c;
  for (const PointSeries& s : series) {
    for (double v : s.x) c.xr.include(v);
    for (double v : s.y) c.yr.include(v);
  }
  c.xr.pad();
  c.yr.pad();
  c.frame(title, "x1", "x2");
  for (const PointSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      c.body += "<circle cx=\"" + num(c.px(s.x[i])) + "\" cy=\"" + num(c.py(s.y[i])) +
                "\" r=\"2.2\" fill=\"" + s.color + "\" fill-opacity=\"0.65\"/>\n";
    }
  }
  std::vector<std::pair<std::string, std::string>> entries;
  for (const PointSeries& s : series) entries.emplace_back(s.label, s.color);
  c.legend(entries);
  return c.finish();
}

std::string line_plot(const std::vector<LineSeries>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label) {
  Canvas c;
  for (const LineSeries& s : series) {
    for (double v : s.x) c.xr.include(v);
    for (double v : s.y) c.yr.include(v);
  }
  c.xr.pad();
  c.yr.pad();
  c.frame(title, x_label, y_label);
  for (const LineSeries& s : series) {
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      d += pen_down ? "L" : "M";
      d += num(c.px(s.x[i])) + " " + num(c.py(s.y[i])) + " ";
      pen_down = true;
    }
    c.body += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + s.color +
              "\" stroke-width=\"1.6\"/>\n";
  }
  std::vector<std::pair<std::string, std::string>> entries;
  for (const LineSeries& s : series) entries.emplace_back(s.label, s.color);
  c.legend(entries);
  return c.finish();
}

std::string box_plot(const std::vector<Box>& boxes, const std::string& title,
                     double reference, const std::string& reference_label) {
  Canvas c;
  c.xr.include(0.0);
  c.xr.include(static_cast<double>(boxes.size()));
  for (const Box& b : boxes) {
    c.yr.include(b.lo);
    c.yr.include(b.hi);
  }
  if (std::isfinite(reference)) c.yr.include(reference);
  c.xr.pad();
  c.yr.pad();
  c.frame(title, "", "final squared Frechet distance");
  const double slot = (kWidth - kMarginLeft - kMarginRight) / std::max<std::size_t>(boxes.size(), 1);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
    double half = slot * 0.22;
    // whiskers
    c.body += "<line x1=\"" + num(cx) + "\" y1=\"" + num(c.py(b.lo)) + "\" x2=\"" + num(cx) +
              "\" y2=\"" + num(c.py(b.q25)) + "\" stroke=\"" + b.color + "\" stroke-width=\"1\"/>\n";
    c.body += "<line x1=\"" + num(cx) + "\" y1=\"" + num(c.py(b.q75)) + "\" x2=\"" + num(cx) +
              "\" y2=\"" + num(c.py(b.hi)) + "\" stroke=\"" + b.color + "\" stroke-width=\"1\"/>\n";
    // quartile box and median bar
    c.body += "<rect x=\"" + num(cx - half) + "\" y=\"" + num(c.py(b.q75)) + "\" width=\"" +
              num(2 * half) + "\" height=\"" + num(c.py(b.q25) - c.py(b.q75)) +
              "\" fill=\"" + b.color + "\" fill-opacity=\"0.35\" stroke=\"" + b.color + "\"/>\n";
    c.body += "<line x1=\"" + num(cx - half) + "\" y1=\"" + num(c.py(b.median)) + "\" x2=\"" +
              num(cx + half) + "\" y2=\"" + num(c.py(b.median)) + "\" stroke=\"" + b.color +
              "\" stroke-width=\"2\"/>\n";
    c.body += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kMarginBottom + 30) +
              "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#222222\">" + b.label +
              "</text>\n";
  }
  if (std::isfinite(reference)) {
    c.body += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(c.py(reference)) +
              "\" x2=\"" + num(kWidth - kMarginRight) + "\" y2=\"" + num(c.py(reference)) +
              "\" stroke=\"#555555\" stroke-dasharray=\"6 4\" stroke-width=\"1.2\"/>\n";
    if (!reference_label.empty()) {
      c.body += "<text x=\"" + num(kWidth - kMarginRight - 4) + "\" y=\"" +
                num(c.py(reference) - 4) +
                "\" font-size=\"10\" text-anchor=\"end\" fill=\"#555555\">" +
                reference_label + "</text>\n";
    }
  }
  return c.finish();
}

}  // namespace ganlab::svg
