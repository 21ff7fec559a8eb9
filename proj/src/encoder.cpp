#include "lanekit/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace lanekit {

void EncoderConfig::validate() const {
  if (!(sigma_h > 0.0)) throw std::invalid_argument("sigma_h must be > 0");
  if (!(sigma_g > 0.0)) throw std::invalid_argument("sigma_g must be > 0");
  if (dy < 1) throw std::invalid_argument("dy must be >= 1");
}

void validate_logits(const LogitMaps& logits) {
  if (!logits.score.spec().valid())
    throw std::invalid_argument("logit planes are empty");
  if (!logits.score.same_shape(logits.off_up) ||
      !logits.score.same_shape(logits.off_mid) ||
      !logits.score.same_shape(logits.off_down))
    throw std::invalid_argument("logit planes have mismatched shapes");
  for (double s : logits.score.data)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("score plane has values outside [0,1]");
}

void require_densified(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec) {
  if (!spec.valid()) throw std::invalid_argument("image spec is empty");
  for (const LaneCurve& c : curves) {
    validate_curve(c);
    for (size_t i = 0; i < c.points.size(); ++i) {
      const ImagePoint& p = c.points[i];
      if (p.y != std::floor(p.y))
        throw std::invalid_argument("curve is not densified (fractional row)");
      if (i > 0 && p.y - c.points[i - 1].y != 1.0)
        throw std::invalid_argument("curve is not densified (row gap)");
      if (!spec.contains(p.x, p.y))
        throw std::invalid_argument("curve point outside the image");
    }
  }
}

Plane render_heatmap(const std::vector<LaneCurve>& curves,
                     const ImageSpec& spec, const EncoderConfig& cfg) {
  cfg.validate();
  require_densified(curves, spec);
  Plane heat = Plane::zeros(spec);
  const double denom = 2.0 * cfg.sigma_h * cfg.sigma_h;
  const double r2max = 9.0 * cfg.sigma_h * cfg.sigma_h;  // 3-sigma cutoff
  const int radius = static_cast<int>(std::ceil(3.0 * cfg.sigma_h));
  for (const LaneCurve& c : curves) {
    for (const ImagePoint& p : c.points) {
      const int cx = nearest_col(p.x, spec.width);
      const int cy = static_cast<int>(p.y);
      const int x0 = std::max(0, cx - radius);
      const int x1 = std::min(spec.width - 1, cx + radius);
      const int y0 = std::max(0, cy - radius);
      const int y1 = std::min(spec.height - 1, cy + radius);
      for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
          const double d2 = static_cast<double>((ix - cx) * (ix - cx) +
                                                (iy - cy) * (iy - cy));
          if (d2 > r2max) continue;
          const double v = std::exp(-d2 / denom);
          double& cell = heat.at(ix, iy);
          if (v > cell) cell = v;
        }
      }
    }
  }
  return heat;
}

std::vector<int> nearest_curve_map(const std::vector<LaneCurve>& curves,
                                   const ImageSpec& spec, double max_dist) {
  std::vector<int> owner(static_cast<size_t>(spec.pixel_count()), -1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> row_x(curves.size(), nan);
  for (int y = 0; y < spec.height; ++y) {
    bool any = false;
    for (size_t i = 0; i < curves.size(); ++i) {
      const auto sx = sample_x(curves[i], static_cast<double>(y));
      row_x[i] = sx ? *sx : nan;
      any = any || sx.has_value();
    }
    if (!any) continue;
    int* out = owner.data() + static_cast<size_t>(y) * spec.width;
    for (int x = 0; x < spec.width; ++x) {
      int best = -1;
      double best_d = 0.0;
      for (size_t i = 0; i < curves.size(); ++i) {
        if (std::isnan(row_x[i])) continue;
        const double d = std::fabs(row_x[i] - x);
        if (d > max_dist) continue;
        const bool take =
            best < 0 || d < best_d ||
            (d == best_d &&
             std::make_pair(curves[i].id, static_cast<int>(i)) <
                 std::make_pair(curves[best].id, best));
        if (take) {
          best = static_cast<int>(i);
          best_d = d;
        }
      }
      out[x] = best;
    }
  }
  return owner;
}

OffsetMaps render_offsets(const std::vector<LaneCurve>& curves,
                          const ImageSpec& spec, const EncoderConfig& cfg) {
  cfg.validate();
  require_densified(curves, spec);
  OffsetMaps maps{Plane::zeros(spec), Plane::zeros(spec), Plane::zeros(spec),
                  Plane::zeros(spec)};
  const std::vector<int> owner = nearest_curve_map(curves, spec, cfg.sigma_g);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const int l = owner[static_cast<size_t>(y) * spec.width + x];
      if (l < 0) continue;
      const LaneCurve& c = curves[static_cast<size_t>(l)];
      const auto up = sample_x(c, static_cast<double>(y - cfg.dy));
      const auto dn = sample_x(c, static_cast<double>(y + cfg.dy));
      // Supervision is undefined when a neighbor row leaves the span; the
      // heatmap, not the offsets, handles curve termination.
      if (!up || !dn) continue;
      const auto mid = sample_x(c, static_cast<double>(y));
      maps.up.at(x, y) = *up - x;
      maps.mid.at(x, y) = *mid - x;
      maps.down.at(x, y) = *dn - x;
      maps.mask.at(x, y) = 1.0;
    }
  }
  return maps;
}

GroundTruthMaps encode(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec, const EncoderConfig& cfg) {
  Plane heat = render_heatmap(curves, spec, cfg);
  OffsetMaps o = render_offsets(curves, spec, cfg);
  return {std::move(heat), std::move(o.up), std::move(o.mid),
          std::move(o.down), std::move(o.mask)};
}

}  // namespace lanekit
