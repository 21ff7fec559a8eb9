#pragma once

#include <cmath>
#include <vector>

#include "lanekit/geometry.hpp"

namespace lanekit {

// Dense per-pixel plane, row-major doubles.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}
  static Plane zeros(const ImageSpec& s) { return Plane(s.width, s.height); }

  ImageSpec spec() const { return {width, height}; }
  bool same_shape(const Plane& o) const {
    return width == o.width && height == o.height;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  double at(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return data[static_cast<size_t>(y) * width + x];
  }
};

// Nearest in-image pixel column/row of a real coordinate.
inline int nearest_col(double x, int width) {
  const int c = static_cast<int>(std::lround(x));
  return c < 0 ? 0 : (c >= width ? width - 1 : c);
}
inline int nearest_row(double y, int height) {
  const int r = static_cast<int>(std::lround(y));
  return r < 0 ? 0 : (r >= height ? height - 1 : r);
}

// The four per-pixel planes produced by the keypoint network (or a synthetic
// stand-in): keypoint score in [0,1], plus horizontal offsets in pixels from
// a pixel to the nearest lane's keypoints one row step above, on the same
// row, and one row step below.
struct LogitMaps {
  Plane score;
  Plane off_up;
  Plane off_mid;
  Plane off_down;

  ImageSpec spec() const { return score.spec(); }
};

// Throws std::invalid_argument unless all planes share one non-empty shape
// and the score plane stays within [0,1].
void validate_logits(const LogitMaps& logits);

}  // namespace lanekit
