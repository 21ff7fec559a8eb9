#include "lanekit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanekit {

void validate_curve(const LaneCurve& curve) {
  if (curve.points.size() < 2)
    throw std::invalid_argument("lane curve needs at least 2 points");
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const ImagePoint& p = curve.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("lane curve has non-finite coordinates");
    if (i > 0 && !(p.y > curve.points[i - 1].y))
      throw std::invalid_argument(
          "lane curve rows must be strictly increasing");
  }
}

namespace {

// Returns the vertex x exactly at segment endpoints so that repeated
// densification is bitwise stable.
double lerp_x(const ImagePoint& a, const ImagePoint& b, double y) {
  if (y == a.y) return a.x;
  if (y == b.y) return b.x;
  const double t = (y - a.y) / (b.y - a.y);
  return a.x + t * (b.x - a.x);
}

}  // namespace

LaneCurve densify(const LaneCurve& curve) {
  validate_curve(curve);
  const int y0 = static_cast<int>(std::ceil(curve.points.front().y));
  const int y1 = static_cast<int>(std::floor(curve.points.back().y));
  if (y1 - y0 + 1 < 2)
    throw std::invalid_argument(
        "lane curve spans fewer than 2 integer rows");

  LaneCurve out;
  out.id = curve.id;
  out.points.reserve(static_cast<size_t>(y1 - y0 + 1));
  size_t seg = 0;
  for (int y = y0; y <= y1; ++y) {
    while (seg + 2 < curve.points.size() &&
           curve.points[seg + 1].y < static_cast<double>(y))
      ++seg;
    out.points.push_back({lerp_x(curve.points[seg], curve.points[seg + 1],
                                 static_cast<double>(y)),
                          static_cast<double>(y)});
  }
  return out;
}

std::optional<double> sample_x(const LaneCurve& curve, double y) {
  const auto& pts = curve.points;
  if (pts.empty() || y < pts.front().y || y > pts.back().y)
    return std::nullopt;
  auto it = std::lower_bound(
      pts.begin(), pts.end(), y,
      [](const ImagePoint& p, double row) { return p.y < row; });
  if (it->y == y) return it->x;
  const ImagePoint& b = *it;
  const ImagePoint& a = *(it - 1);
  return a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
}

LaneCurve resample_rows(const LaneCurve& curve, int dy) {
  if (dy < 1) throw std::invalid_argument("row interval dy must be >= 1");
  validate_curve(curve);
  const double top = curve.points.front().y;
  const double bottom = curve.points.back().y;
  LaneCurve out;
  out.id = curve.id;
  for (long long k = static_cast<long long>(std::ceil(top / dy));; ++k) {
    const double y = static_cast<double>(k * dy);
    if (y > bottom) break;
    out.points.push_back({*sample_x(curve, y), y});
  }
  if (out.points.size() < 2)
    throw std::invalid_argument(
        "curve spans fewer than 2 rows of the dy grid");
  return out;
}

}  // namespace lanekit
