#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lanekit/geometry.hpp"

namespace lanekit {

// JSON lane document:
//   { "image_size": [width, height],
//     "lanes": [ { "id": 0, "points": [[x, y], ...], "score": 0.9 }, ... ] }
// Points are stored y-ascending; score is optional. Values round-trip
// exactly (shortest representation that restores the double).
struct LaneFile {
  struct Entry {
    LaneCurve curve;
    std::optional<double> score;
  };
  ImageSpec image;
  std::vector<Entry> lanes;
};

void write_lane_file(const std::string& path, const LaneFile& file);
LaneFile read_lane_file(const std::string& path);
LaneFile lane_file_from_json(const std::string& text);
std::string lane_file_to_json(const LaneFile& file);

std::vector<LaneCurve> lane_file_curves(const LaneFile& file);

struct ParsedLanes {
  std::vector<LaneCurve> curves;
  std::vector<std::string> warnings;
};

// One "x1 y1 x2 y2 ..." line per lane; points are sorted into y-ascending
// order (duplicate rows keep the first occurrence). Lines with fewer than
// two usable points are skipped with a warning; an odd token count is a
// ParseError naming the line.
ParsedLanes parse_culane_annotation(const std::vector<std::string>& lines);

// One JSON record with "h_samples" and "lanes" (per-row x lists, -2 marks an
// absent row). Lanes with fewer than two present rows are dropped; a length
// mismatch against h_samples is a ParseError.
ParsedLanes parse_tusimple_record(const std::string& json_text);

}  // namespace lanekit
