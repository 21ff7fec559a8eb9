#include "lanekit/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace lanekit {

void DecoderConfig::validate() const {
  if (!(theta_h > 0.0 && theta_h < 1.0))
    throw std::invalid_argument("theta_h must be in (0,1)");
  if (dy < 1) throw std::invalid_argument("dy must be >= 1");
  if (nms_window < 1) throw std::invalid_argument("nms_window must be >= 1");
  if (!(max_assoc_dist > 0.0))
    throw std::invalid_argument("max_assoc_dist must be > 0");
  if (min_points < 2) throw std::invalid_argument("min_points must be >= 2");
}

std::vector<int> row_local_maxima(const Plane& score, int row,
                                  const DecoderConfig& cfg) {
  cfg.validate();
  if (row < 0 || row >= score.height)
    throw std::invalid_argument("row outside the score plane");
  std::vector<int> cols;
  for (int c = 0; c < score.width; ++c) {
    const double v = score.at(c, row);
    if (v < cfg.theta_h) continue;
    bool is_max = true;
    const int lo = std::max(0, c - cfg.nms_window);
    const int hi = std::min(score.width - 1, c + cfg.nms_window);
    for (int cc = lo; cc <= hi && is_max; ++cc) {
      if (cc == c) continue;
      const double w = score.at(cc, row);
      if (w > v || (w == v && cc < c)) is_max = false;
    }
    if (is_max) cols.push_back(c);
  }
  return cols;
}

namespace {

std::vector<int> grid_rows(int height, int dy) {
  std::vector<int> rows;
  for (int r = 0; r < height; r += dy) rows.push_back(r);
  return rows;
}

}  // namespace

std::optional<StartRow> select_start_row(const Plane& score,
                                         const DecoderConfig& cfg) {
  cfg.validate();
  std::optional<StartRow> best;
  for (int r : grid_rows(score.height, cfg.dy)) {
    std::vector<int> cols = row_local_maxima(score, r, cfg);
    if (cols.empty()) continue;
    // >= keeps the later (larger y) row on ties.
    if (!best || cols.size() >= best->cols.size())
      best = StartRow{r, std::move(cols)};
  }
  return best;
}

namespace {

// Claim bookkeeping for the sequential decoder: one flag row per grid row.
class ClaimGrid {
 public:
  ClaimGrid(int width, int height, int dy, int window)
      : width_(width), dy_(dy), window_(window),
        rows_((height + dy - 1) / dy, std::vector<bool>(width, false)) {}

  void claim(int row, double x) {
    auto& flags = rows_[static_cast<size_t>(row / dy_)];
    const int c = nearest_col(x, width_);
    for (int i = std::max(0, c - window_);
         i <= std::min(width_ - 1, c + window_); ++i)
      flags[static_cast<size_t>(i)] = true;
  }

  bool claimed(int row, int col) const {
    return rows_[static_cast<size_t>(row / dy_)][static_cast<size_t>(col)];
  }

 private:
  int width_;
  int dy_;
  int window_;
  std::vector<std::vector<bool>> rows_;
};

void sort_lanes(std::vector<DecodedLane>& lanes) {
  std::sort(lanes.begin(), lanes.end(),
            [](const DecodedLane& a, const DecodedLane& b) {
              if (a.points.back().x != b.points.back().x)
                return a.points.back().x < b.points.back().x;
              if (a.points.front().x != b.points.front().x)
                return a.points.front().x < b.points.front().x;
              return a.points.size() < b.points.size();
            });
}

}  // namespace

std::vector<DecodedLane> greedy_decode(const LogitMaps& logits,
                                       const DecoderConfig& cfg) {
  cfg.validate();
  validate_logits(logits);
  const ImageSpec spec = logits.spec();
  const Plane& score = logits.score;
  ClaimGrid claims(spec.width, spec.height, cfg.dy, cfg.nms_window);

  const auto refine = [&](double x, int y) {
    if (!cfg.refine) return x;
    return x + logits.off_mid.at(nearest_col(x, spec.width), y);
  };

  // One growth step: the accepted proposal's refined point, its score, and
  // the pixel the threshold test ran at. Nothing when the proposal leaves
  // the image, falls below threshold, or lands on territory another lane
  // already claimed.
  struct Step {
    ImagePoint point;
    double score = 0.0;
    int pixel = 0;
  };
  const auto step = [&](double x, int y, bool upward) -> std::optional<Step> {
    const int px = nearest_col(x, spec.width);
    const double off = upward ? logits.off_up.at(px, y)
                              : logits.off_down.at(px, y);
    const double nx = x + off;
    const int ny = upward ? y - cfg.dy : y + cfg.dy;
    if (ny < 0 || ny >= spec.height) return std::nullopt;
    const int qx = static_cast<int>(std::lround(nx));
    if (qx < 0 || qx >= spec.width) return std::nullopt;
    const double s = score.at(qx, ny);
    if (s < cfg.theta_h) return std::nullopt;
    if (claims.claimed(ny, qx)) return std::nullopt;  // duplicate suppression
    return Step{{refine(nx, ny), static_cast<double>(ny)}, s, qx};
  };

  std::vector<DecodedLane> lanes;
  while (true) {
    // Best remaining row: most unclaimed maxima, ties toward the bottom.
    std::optional<StartRow> seed_row;
    for (int r : grid_rows(spec.height, cfg.dy)) {
      std::vector<int> cols = row_local_maxima(score, r, cfg);
      std::erase_if(cols, [&](int c) { return claims.claimed(r, c); });
      if (cols.empty()) continue;
      if (!seed_row || cols.size() >= seed_row->cols.size())
        seed_row = StartRow{r, std::move(cols)};
    }
    if (!seed_row) break;

    for (int c : seed_row->cols) {
      if (claims.claimed(seed_row->row, c)) continue;
      const int r0 = seed_row->row;
      std::deque<ImagePoint> pts;
      std::deque<double> scs;
      const ImagePoint seed{refine(static_cast<double>(c), r0),
                            static_cast<double>(r0)};
      pts.push_back(seed);
      scs.push_back(score.at(c, r0));
      // Claim the seeding maximum itself, not just the refined point:
      // noisy refinement can move the point out of the claim window and
      // the re-seed scan must never pick the same maximum twice.
      claims.claim(r0, static_cast<double>(c));
      claims.claim(r0, seed.x);

      for (const bool upward : {true, false}) {
        ImagePoint cur = seed;
        while (auto next = step(cur.x, static_cast<int>(cur.y), upward)) {
          cur = next->point;
          claims.claim(static_cast<int>(cur.y),
                       static_cast<double>(next->pixel));
          claims.claim(static_cast<int>(cur.y), cur.x);
          if (upward) {
            pts.push_front(cur);
            scs.push_front(next->score);
          } else {
            pts.push_back(cur);
            scs.push_back(next->score);
          }
        }
      }

      if (static_cast<int>(pts.size()) < cfg.min_points) continue;
      lanes.push_back({{pts.begin(), pts.end()}, {scs.begin(), scs.end()}});
    }
  }
  sort_lanes(lanes);
  return lanes;
}

namespace {

struct Keypoint {
  int row = 0;
  int col = 0;
  double up_x = 0.0;    // predicted position one grid row above
  double down_x = 0.0;  // predicted position one grid row below
  double right_x = 0.0; // refined position on the own row
  int up = -1;          // linked keypoint index in the row above
  int down = -1;        // linked keypoint index in the row below
};

struct Link {
  double dist = 0.0;
  int upper = 0;  // keypoint index in the smaller-y row
  int lower = 0;  // keypoint index in the larger-y row
};

}  // namespace

std::vector<DecodedLane> efficient_decode(const LogitMaps& logits,
                                          const DecoderConfig& cfg) {
  cfg.validate();
  validate_logits(logits);
  const ImageSpec spec = logits.spec();

  // Step 1: all grid-row maxima at once.
  std::vector<Keypoint> kps;
  std::map<int, std::pair<int, int>> row_span;  // row -> [first, last) in kps
  for (int r : grid_rows(spec.height, cfg.dy)) {
    const int first = static_cast<int>(kps.size());
    for (int c : row_local_maxima(logits.score, r, cfg)) {
      Keypoint kp;
      kp.row = r;
      kp.col = c;
      kp.up_x = c + logits.off_up.at(c, r);      // Step 2, one batch
      kp.down_x = c + logits.off_down.at(c, r);
      kp.right_x = cfg.refine ? c + logits.off_mid.at(c, r)
                              : static_cast<double>(c);
      kps.push_back(kp);
    }
    if (static_cast<int>(kps.size()) > first)
      row_span[r] = {first, static_cast<int>(kps.size())};
  }

  // Step 3: candidate links to the nearest keypoint in the adjacent rows,
  // capped by max_assoc_dist. Both directions propose; duplicates keep the
  // smaller distance.
  const auto nearest_in_row = [&](int row, double x) -> std::pair<int, double> {
    const auto it = row_span.find(row);
    if (it == row_span.end()) return {-1, 0.0};
    int best = -1;
    double best_d = 0.0;
    for (int i = it->second.first; i < it->second.second; ++i) {
      const double d = std::fabs(kps[static_cast<size_t>(i)].col - x);
      if (best < 0 || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    return {best, best_d};
  };

  std::map<std::pair<int, int>, double> link_dist;
  for (int i = 0; i < static_cast<int>(kps.size()); ++i) {
    const Keypoint& kp = kps[static_cast<size_t>(i)];
    const auto [up_j, up_d] = nearest_in_row(kp.row - cfg.dy, kp.up_x);
    if (up_j >= 0 && up_d <= cfg.max_assoc_dist) {
      const auto key = std::make_pair(up_j, i);
      const auto it = link_dist.find(key);
      if (it == link_dist.end() || up_d < it->second) link_dist[key] = up_d;
    }
    const auto [dn_j, dn_d] = nearest_in_row(kp.row + cfg.dy, kp.down_x);
    if (dn_j >= 0 && dn_d <= cfg.max_assoc_dist) {
      const auto key = std::make_pair(i, dn_j);
      const auto it = link_dist.find(key);
      if (it == link_dist.end() || dn_d < it->second) link_dist[key] = dn_d;
    }
  }

  // Step 4: each keypoint joins at most one lane per direction; conflicting
  // claims resolve by smaller distance (then by index, for determinism).
  std::vector<Link> links;
  links.reserve(link_dist.size());
  for (const auto& [key, d] : link_dist)
    links.push_back({d, key.first, key.second});
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.upper != b.upper) return a.upper < b.upper;
    return a.lower < b.lower;
  });
  for (const Link& link : links) {
    Keypoint& upper = kps[static_cast<size_t>(link.upper)];
    Keypoint& lower = kps[static_cast<size_t>(link.lower)];
    if (upper.down >= 0 || lower.up >= 0) continue;
    upper.down = link.lower;
    lower.up = link.upper;
  }

  // Linked chains become lanes.
  std::vector<DecodedLane> lanes;
  std::vector<bool> used(kps.size(), false);
  for (int i = 0; i < static_cast<int>(kps.size()); ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    int top = i;
    while (kps[static_cast<size_t>(top)].up >= 0)
      top = kps[static_cast<size_t>(top)].up;
    DecodedLane lane;
    for (int j = top; j >= 0; j = kps[static_cast<size_t>(j)].down) {
      used[static_cast<size_t>(j)] = true;
      const Keypoint& kp = kps[static_cast<size_t>(j)];
      lane.points.push_back({kp.right_x, static_cast<double>(kp.row)});
      lane.scores.push_back(logits.score.at(kp.col, kp.row));
    }
    if (static_cast<int>(lane.points.size()) >= cfg.min_points)
      lanes.push_back(std::move(lane));
  }
  sort_lanes(lanes);
  return lanes;
}

}  // namespace lanekit
