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

// SVG scatter plot of ID vs OOD accuracy on logit-scaled axes, with the
// baseline curve, its significance-shifted copy and the region above the
// reference model's OOD accuracy.

#ifndef LSR_PLOT_H_
#define LSR_PLOT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lsr/report.h"

namespace lsr {

// Maps accuracies to pixel coordinates. Both axes are linear in logit(acc).
class PlotGeometry {
 public:
  PlotGeometry(double logit_x_lo, double logit_x_hi, double logit_y_lo,
               double logit_y_hi, int width, int height);

  // Covers every point with a margin.
  static PlotGeometry Fit(const std::vector<AccuracyPoint>& points, int width,
                          int height);

  double PixelX(double acc_id) const;
  double PixelY(double acc_ood) const;
  double LogitXAt(double pixel_x) const;

  double left() const { return left_; }
  double right() const { return right_; }
  double top() const { return top_; }
  double bottom() const { return bottom_; }
  double logit_x_lo() const { return x_lo_; }
  double logit_x_hi() const { return x_hi_; }
  double logit_y_lo() const { return y_lo_; }
  double logit_y_hi() const { return y_hi_; }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  double x_lo_, x_hi_, y_lo_, y_hi_;
  int width_, height_;
  double left_, right_, top_, bottom_;
};

struct PlotOptions {
  int width = 1000;
  int height = 1000;
  double lambda = 1.0;
  // OOD accuracy of the reference model; shades the tau > 0 region.
  std::optional<double> reference_ood;
  std::string title;
  // Samples along each curve.
  int curve_samples = 101;
};

// Pixel vertices of the baseline (lambda = 0) or shifted curve as drawn.
std::vector<std::pair<double, double>> CurvePolyline(
    const PlotGeometry& geom, const FitParameters& fit, double lambda,
    int samples);

// Deterministic: identical inputs give identical bytes.
std::string RenderScatterSvg(const FitParameters& fit,
                             const std::vector<ModelPoint>& points,
                             const PlotOptions& options);

void EmitScatter(const FitParameters& fit,
                 const std::vector<ModelPoint>& points,
                 const PlotOptions& options,
                 const std::filesystem::path& out);

}  // namespace lsr

#endif  // LSR_PLOT_H_
