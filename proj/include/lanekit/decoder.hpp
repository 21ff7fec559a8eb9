#pragma once

#include <optional>
#include <vector>

#include "lanekit/geometry.hpp"
#include "lanekit/maps.hpp"

namespace lanekit {

struct DecoderConfig {
  double theta_h = 0.5;         // heatmap acceptance threshold
  int dy = 10;                  // row grid interval, px
  int nms_window = 5;           // half-width of the row maxima window, px
  double max_assoc_dist = 20.0; // association cap for the batch decoder, px
  int min_points = 2;           // lanes shorter than this are dropped
  bool refine = true;           // apply the same-row offset refinement

  void validate() const;
};

// A decoded lane instance: points on consecutive grid rows (y strictly
// increasing in steps of dy) with the heatmap value at each accepted point.
struct DecodedLane {
  std::vector<ImagePoint> points;
  std::vector<double> scores;
};

// Columns c with score(c,row) >= theta_h that are the maximum of the window
// [c-nms_window, c+nms_window]; on equal values the leftmost column wins, so
// a plateau emits one point. Throws when row is out of bounds.
std::vector<int> row_local_maxima(const Plane& score, int row,
                                  const DecoderConfig& cfg);

struct StartRow {
  int row = 0;
  std::vector<int> cols;
};

// The dy-grid row with the most local maxima; ties resolve toward the
// largest y (closest to the camera). Empty when no grid row has a maximum.
std::optional<StartRow> select_start_row(const Plane& score,
                                         const DecoderConfig& cfg);

// Sequential decoder: seeds lanes at the best start row, refines each point
// with the same-row offset, and walks up/down one grid row at a time while
// the heatmap supports the proposal. Decoded points claim their neighborhood
// so later seeds do not duplicate an already-decoded lane; remaining
// unclaimed maxima re-seed further lanes.
std::vector<DecodedLane> greedy_decode(const LogitMaps& logits,
                                       const DecoderConfig& cfg);

// Batch decoder: collects maxima on every grid row at once, predicts each
// keypoint's neighbors, links keypoints across adjacent rows by smallest
// horizontal distance (each keypoint joins at most one lane per direction),
// and emits the linked groups.
std::vector<DecodedLane> efficient_decode(const LogitMaps& logits,
                                          const DecoderConfig& cfg);

}  // namespace lanekit
