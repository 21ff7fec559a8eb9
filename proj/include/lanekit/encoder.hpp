#pragma once

#include <vector>

#include "lanekit/geometry.hpp"
#include "lanekit/maps.hpp"

namespace lanekit {

struct EncoderConfig {
  double sigma_h = 2.0;  // std-dev of the Gaussian heat targets, px
  double sigma_g = 5.0;  // half-width of the offset supervision band, px
  int dy = 10;           // vertical keypoint interval, px

  void validate() const;
};

// Supervision targets rendered from annotated curves.
//   heat     in [0,1], exactly 1 on curve pixels
//   off_*    horizontal offsets (px) to the owning curve at rows y-dy, y, y+dy
//   mask     1 where all three offset targets are defined, else 0; offset
//            planes hold 0 wherever mask is 0
struct GroundTruthMaps {
  Plane heat;
  Plane off_up;
  Plane off_mid;
  Plane off_down;
  Plane mask;
};

struct OffsetMaps {
  Plane up;
  Plane mid;
  Plane down;
  Plane mask;
};

// Throws std::invalid_argument unless every curve sits on consecutive integer
// rows (the densified form) with all points inside the image.
void require_densified(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec);

// Unnormalized Gaussian rendered around every curve pixel, truncated at
// 3*sigma_h; overlapping contributions keep the per-pixel maximum, so the
// result does not depend on curve order.
Plane render_heatmap(const std::vector<LaneCurve>& curves,
                     const ImageSpec& spec, const EncoderConfig& cfg);

// Index of the horizontally nearest curve for each pixel, or -1 where no
// curve covers the row within max_dist. Distance is measured within the row
// (offsets are purely horizontal quantities). Ties go to the smaller curve
// id, then the smaller list index.
std::vector<int> nearest_curve_map(const std::vector<LaneCurve>& curves,
                                   const ImageSpec& spec, double max_dist);

OffsetMaps render_offsets(const std::vector<LaneCurve>& curves,
                          const ImageSpec& spec, const EncoderConfig& cfg);

GroundTruthMaps encode(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec, const EncoderConfig& cfg);

}  // namespace lanekit
