#pragma once

#include <optional>
#include <vector>

namespace lanekit {

// Image coordinates: origin at top-left, x grows right, y grows downward,
// units are pixels. Coordinates are real-valued (subpixel).
struct ImagePoint {
  double x = 0.0;
  double y = 0.0;
};

struct ImageSpec {
  int width = 0;
  int height = 0;

  bool valid() const { return width > 0 && height > 0; }
  bool contains(double x, double y) const {
    return x >= 0.0 && x < static_cast<double>(width) && y >= 0.0 &&
           y < static_cast<double>(height);
  }
  long long pixel_count() const {
    return static_cast<long long>(width) * height;
  }
};

// A lane marker as an ordered polyline with strictly increasing y, i.e. the
// lane is a single-valued function x = phi(y) over its vertical span.
// Annotations that fold back in y are rejected rather than split.
struct LaneCurve {
  std::vector<ImagePoint> points;
  int id = 0;

  double top_y() const { return points.front().y; }
  double bottom_y() const { return points.back().y; }
};

// Throws std::invalid_argument unless the curve has >= 2 finite points with
// strictly increasing y.
void validate_curve(const LaneCurve& curve);

// Resamples the polyline onto every integer row of its span by piecewise
// linear interpolation. Vertex rows reproduce the original x exactly, so
// densify(densify(c)) == densify(c). Throws if the span covers fewer than
// two integer rows.
LaneCurve densify(const LaneCurve& curve);

// x at row y by linear interpolation between the neighboring vertices.
// Empty when y lies outside the curve's span; never extrapolates.
// Precondition: curve is valid (not re-checked here, this is a hot path).
std::optional<double> sample_x(const LaneCurve& curve, double y);

// Samples the curve at rows that are multiples of dy, so every curve in an
// image shares the same row grid. Throws std::invalid_argument for dy < 1
// or when fewer than two grid rows fall inside the span.
LaneCurve resample_rows(const LaneCurve& curve, int dy);

}  // namespace lanekit
