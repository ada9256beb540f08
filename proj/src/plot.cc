/*
 * Copyright 2026 The lsr Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lsr/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lsr/error.h"
#include "lsr/io.h"

namespace lsr {

namespace {

constexpr double kMarginLeft = 90.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 70.0;

// Candidate tick positions, in percent.
constexpr double kTicks[] = {0.1, 0.5, 1,  2,  5,  10, 20, 30,   40,   50,
                             60,  70,  80, 90, 95, 98, 99, 99.5, 99.9};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
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

std::string TickLabel(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g%%", pct);
  return buf;
}

}  // namespace

PlotGeometry::PlotGeometry(double logit_x_lo, double logit_x_hi,
                           double logit_y_lo, double logit_y_hi, int width,
                           int height)
    : x_lo_(logit_x_lo),
      x_hi_(logit_x_hi),
      y_lo_(logit_y_lo),
      y_hi_(logit_y_hi),
      width_(width),
      height_(height),
      left_(kMarginLeft),
      right_(width - kMarginRight),
      top_(kMarginTop),
      bottom_(height - kMarginBottom) {
  if (!(x_hi_ > x_lo_) || !(y_hi_ > y_lo_)) {
    throw std::invalid_argument("plot range is empty");
  }
  if (!(right_ > left_) || !(bottom_ > top_)) {
    throw std::invalid_argument("plot is too small for its margins");
  }
}

PlotGeometry PlotGeometry::Fit(const std::vector<AccuracyPoint>& points,
                               int width, int height) {
  double xl = -1.0, xh = 1.0, yl = -1.0, yh = 1.0;
  if (!points.empty()) {
    xl = yl = INFINITY;
    xh = yh = -INFINITY;
    for (const auto& p : points) {
      const double x = Logit(p.acc_id);
      const double y = Logit(p.acc_ood);
      xl = std::min(xl, x);
      xh = std::max(xh, x);
      yl = std::min(yl, y);
      yh = std::max(yh, y);
    }
  }
  auto pad = [](double& lo, double& hi) {
    const double span = std::max(hi - lo, 1.0);
    const double mid = 0.5 * (lo + hi);
    lo = mid - 0.6 * span;
    hi = mid + 0.6 * span;
  };
  pad(xl, xh);
  pad(yl, yh);
  return PlotGeometry(xl, xh, yl, yh, width, height);
}

double PlotGeometry::PixelX(double acc_id) const {
  return left_ + (Logit(acc_id) - x_lo_) / (x_hi_ - x_lo_) * (right_ - left_);
}

double PlotGeometry::PixelY(double acc_ood) const {
  return bottom_ -
         (Logit(acc_ood) - y_lo_) / (y_hi_ - y_lo_) * (bottom_ - top_);
}

double PlotGeometry::LogitXAt(double pixel_x) const {
  return x_lo_ + (pixel_x - left_) / (right_ - left_) * (x_hi_ - x_lo_);
}

std::vector<std::pair<double, double>> CurvePolyline(const PlotGeometry& geom,
                                                     const FitParameters& fit,
                                                     double lambda,
                                                     int samples) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double lx = geom.logit_x_lo() + (geom.logit_x_hi() - geom.logit_x_lo()) *
                                              i / (samples - 1);
    // Work in logit space so points outside the clamped range still plot.
    const double ly = fit.fit.w * lx + fit.fit.b + lambda * fit.d;
    const double px = geom.left() + (lx - geom.logit_x_lo()) /
                                        (geom.logit_x_hi() - geom.logit_x_lo()) *
                                        (geom.right() - geom.left());
    const double py = geom.bottom() - (ly - geom.logit_y_lo()) /
                                          (geom.logit_y_hi() - geom.logit_y_lo()) *
                                          (geom.bottom() - geom.top());
    out.emplace_back(px, py);
  }
  return out;
}

std::string RenderScatterSvg(const FitParameters& fit,
                             const std::vector<ModelPoint>& points,
                             const PlotOptions& options) {
  std::vector<AccuracyPoint> coords;
  for (const auto& p : points) coords.push_back(p.point);
  if (options.reference_ood) {
    coords.push_back({0.5, ClampAccuracy(*options.reference_ood)});
  }
  const PlotGeometry g = PlotGeometry::Fit(coords, options.width, options.height);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(options.width) + "\" height=\"" +
       std::to_string(options.height) + "\" viewBox=\"0 0 " +
       std::to_string(options.width) + " " + std::to_string(options.height) +
       "\">\n";
  s += "<defs><clipPath id=\"plot-area\"><rect x=\"" + Num(g.left()) +
       "\" y=\"" + Num(g.top()) + "\" width=\"" + Num(g.right() - g.left()) +
       "\" height=\"" + Num(g.bottom() - g.top()) +
       "\"/></clipPath></defs>\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (options.reference_ood) {
    const double y =
        std::clamp(g.PixelY(ClampAccuracy(*options.reference_ood)), g.top(),
                   g.bottom());
    s += "<rect class=\"tau-region\" x=\"" + Num(g.left()) + "\" y=\"" +
         Num(g.top()) + "\" width=\"" + Num(g.right() - g.left()) +
         "\" height=\"" + Num(y - g.top()) +
         "\" fill=\"#cfe2f3\" fill-opacity=\"0.6\"/>\n";
  }

  // Ticks and grid.
  s += "<g class=\"axes\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  std::string labels;
  for (double pct : kTicks) {
    const double lg = Logit(pct / 100.0);
    if (lg >= g.logit_x_lo() && lg <= g.logit_x_hi()) {
      const std::string x = Num(g.PixelX(pct / 100.0));
      s += "<line x1=\"" + x + "\" y1=\"" + Num(g.top()) + "\" x2=\"" + x +
           "\" y2=\"" + Num(g.bottom()) + "\"/>\n";
      labels += "<text x=\"" + x + "\" y=\"" + Num(g.bottom() + 20) +
                "\" text-anchor=\"middle\">" + TickLabel(pct) + "</text>\n";
    }
    if (lg >= g.logit_y_lo() && lg <= g.logit_y_hi()) {
      const std::string y = Num(g.PixelY(pct / 100.0));
      s += "<line x1=\"" + Num(g.left()) + "\" y1=\"" + y + "\" x2=\"" +
           Num(g.right()) + "\" y2=\"" + y + "\"/>\n";
      labels += "<text x=\"" + Num(g.left() - 8) + "\" y=\"" + y +
                "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
                TickLabel(pct) + "</text>\n";
    }
  }
  s += "</g>\n";
  s += "<rect x=\"" + Num(g.left()) + "\" y=\"" + Num(g.top()) + "\" width=\"" +
       Num(g.right() - g.left()) + "\" height=\"" + Num(g.bottom() - g.top()) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"12\">\n" + labels + "</g>\n";
  s += "<text x=\"" + Num(0.5 * (g.left() + g.right())) + "\" y=\"" +
       Num(options.height - 20.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">ID accuracy (logit scale)</text>\n";
  s += "<text transform=\"translate(20 " + Num(0.5 * (g.top() + g.bottom())) +
       ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">OOD accuracy (logit scale)</text>\n";
  if (!options.title.empty()) {
    s += "<text x=\"" + Num(0.5 * options.width) +
         "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         Escape(options.title) + "</text>\n";
  }

  auto polyline = [&](const char* cls, double lambda, const char* style) {
    std::string pts;
    for (const auto& [x, y] :
         CurvePolyline(g, fit, lambda, options.curve_samples)) {
      if (!pts.empty()) pts += ' ';
      pts += Num(x) + "," + Num(y);
    }
    s += std::string("<polyline class=\"") + cls +
         "\" clip-path=\"url(#plot-area)\" fill=\"none\" " + style +
         " points=\"" + pts + "\"/>\n";
  };
  polyline("beta", 0.0, "stroke=\"black\" stroke-width=\"2\"");
  if (options.lambda * fit.d != 0.0) {
    polyline("beta-lambda", options.lambda,
             "stroke=\"#555555\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  }

  s += "<g class=\"points\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (const auto& p : points) {
    const char* fill = "#888888";
    const char* shape = "standard";
    if (p.role == ModelRole::kIntervention) {
      fill = "#d62728";
      shape = "intervention";
    } else if (p.role == ModelRole::kReference) {
      fill = "#1f77b4";
      shape = "reference";
    }
    const std::string x = Num(g.PixelX(p.point.acc_id));
    const std::string y = Num(g.PixelY(p.point.acc_ood));
    s += "<circle class=\"" + std::string(shape) + "\" cx=\"" + x +
         "\" cy=\"" + y + "\" r=\"5\" fill=\"" + fill + "\"><title>" +
         Escape(p.model) + " (" + std::string(RegimeName(p.regime)) +
         ")</title></circle>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

void EmitScatter(const FitParameters& fit,
                 const std::vector<ModelPoint>& points,
                 const PlotOptions& options,
                 const std::filesystem::path& out) {
  WriteFileBytes(out, RenderScatterSvg(fit, points, options));
}

}  // namespace lsr
