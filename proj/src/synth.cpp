#include "lanekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lanekit/error.hpp"
#include "lanekit/rng.hpp"

namespace lanekit {

void SceneSpec::validate() const {
  if (!image.valid()) throw std::invalid_argument("scene image spec is empty");
  if (n_lanes < 1 || n_lanes > 5)
    throw std::invalid_argument("n_lanes must be in [1,5]");
  if (!(min_separation > 0.0))
    throw std::invalid_argument("min_separation must be > 0");
  if (!(x_margin >= 0.0)) throw std::invalid_argument("x_margin must be >= 0");
  if (!(0.0 <= top_min && top_min <= top_max && top_max < bottom_min &&
        bottom_min <= bottom_max && bottom_max <= 1.0))
    throw std::invalid_argument(
        "span fractions must satisfy 0 <= top_min <= top_max < bottom_min "
        "<= bottom_max <= 1 so all lanes share rows");
  if (max_attempts < 1)
    throw std::invalid_argument("max_attempts must be >= 1");
}

void NoiseSpec::validate() const {
  if (!(score_noise_sd >= 0.0))
    throw std::invalid_argument("score_noise_sd must be >= 0");
  if (!(offset_noise_sd >= 0.0))
    throw std::invalid_argument("offset_noise_sd must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0))
    throw std::invalid_argument("dropout_prob must be in [0,1]");
}

namespace {

// Coefficient ranges keep |dx/dy| under ~1.4 so lanes stay decodable by a
// forward-camera geometry budget (association cap of 2*dy).
struct LanePoly {
  double x0 = 0.0;  // x at the bottom anchor
  double slope = 0.0;
  double quad = 0.0;
  double cubic = 0.0;
  double y_top = 0.0;
  double y_bottom = 0.0;

  double x_at(double y) const {
    const double t = y - y_bottom;
    return x0 + slope * t + quad * t * t + cubic * t * t * t;
  }
};

LanePoly sample_poly(const SceneSpec& s, PortableRng& rng) {
  const double h = s.image.height;
  LanePoly p;
  p.y_top = rng.uniform(s.top_min * h, s.top_max * h);
  p.y_bottom = rng.uniform(s.bottom_min * h, s.bottom_max * h);
  const double span = p.y_bottom - p.y_top;
  p.x0 = rng.uniform(s.x_margin, s.image.width - 1.0 - s.x_margin);
  switch (s.family) {
    case CurveFamily::straight:
      p.slope = rng.uniform(-1.0, 1.0);
      break;
    case CurveFamily::quadratic:
      p.slope = rng.uniform(-0.8, 0.8);
      p.quad = rng.uniform(-0.25, 0.25) / span;
      break;
    case CurveFamily::cubic:
      p.slope = rng.uniform(-0.7, 0.7);
      p.quad = rng.uniform(-0.2, 0.2) / span;
      p.cubic = rng.uniform(-0.1, 0.1) / (span * span);
      break;
  }
  return p;
}

LaneCurve poly_to_curve(const LanePoly& p, int id) {
  LaneCurve c;
  c.id = id;
  const int y0 = static_cast<int>(std::ceil(p.y_top));
  const int y1 = static_cast<int>(std::floor(p.y_bottom));
  c.points.reserve(static_cast<size_t>(y1 - y0 + 1));
  for (int y = y0; y <= y1; ++y)
    c.points.push_back({p.x_at(static_cast<double>(y)),
                        static_cast<double>(y)});
  return c;
}

bool curve_in_bounds(const LaneCurve& c, const SceneSpec& s) {
  if (c.points.size() < 2) return false;
  for (const ImagePoint& p : c.points)
    if (p.x < s.x_margin || p.x > s.image.width - 1.0 - s.x_margin)
      return false;
  return true;
}

// Brute-force row scan over the shared span (both curves hold one point per
// integer row, so rows align by index).
bool separated(const LaneCurve& a, const LaneCurve& b, double min_sep) {
  const int lo = static_cast<int>(std::max(a.top_y(), b.top_y()));
  const int hi = static_cast<int>(std::min(a.bottom_y(), b.bottom_y()));
  for (int y = lo; y <= hi; ++y) {
    const double xa = a.points[static_cast<size_t>(y - static_cast<int>(a.top_y()))].x;
    const double xb = b.points[static_cast<size_t>(y - static_cast<int>(b.top_y()))].x;
    if (std::fabs(xa - xb) < min_sep) return false;
  }
  return true;
}

}  // namespace

std::vector<LaneCurve> gen_scene(const SceneSpec& spec) {
  spec.validate();
  PortableRng rng(spec.seed);
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<LaneCurve> lanes;
    bool ok = true;
    for (int i = 0; i < spec.n_lanes && ok; ++i) {
      ok = false;
      for (int retry = 0; retry < 50; ++retry) {
        LaneCurve cand = poly_to_curve(sample_poly(spec, rng),
                                       static_cast<int>(lanes.size()));
        if (!curve_in_bounds(cand, spec)) continue;
        const bool clear = std::all_of(
            lanes.begin(), lanes.end(), [&](const LaneCurve& other) {
              return separated(cand, other, spec.min_separation);
            });
        if (!clear) continue;
        lanes.push_back(std::move(cand));
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    std::sort(lanes.begin(), lanes.end(),
              [](const LaneCurve& a, const LaneCurve& b) {
                return a.points.back().x < b.points.back().x;
              });
    for (size_t i = 0; i < lanes.size(); ++i)
      lanes[i].id = static_cast<int>(i);
    return lanes;
  }
  throw InfeasibleSceneError(
      "scene constraints not satisfiable within max_attempts");
}

LogitMaps render_ideal(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec, const EncoderConfig& cfg) {
  cfg.validate();
  require_densified(curves, spec);
  LogitMaps out{render_heatmap(curves, spec, cfg), Plane::zeros(spec),
                Plane::zeros(spec), Plane::zeros(spec)};
  const std::vector<int> owner = nearest_curve_map(curves, spec, cfg.sigma_g);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const int l = owner[static_cast<size_t>(y) * spec.width + x];
      if (l < 0) continue;
      const LaneCurve& c = curves[static_cast<size_t>(l)];
      out.off_mid.at(x, y) = *sample_x(c, static_cast<double>(y)) - x;
      if (const auto up = sample_x(c, static_cast<double>(y - cfg.dy)))
        out.off_up.at(x, y) = *up - x;
      if (const auto dn = sample_x(c, static_cast<double>(y + cfg.dy)))
        out.off_down.at(x, y) = *dn - x;
    }
  }
  return out;
}

LogitMaps perturb(const LogitMaps& logits, const NoiseSpec& noise,
                  const EncoderConfig& enc) {
  noise.validate();
  enc.validate();
  validate_logits(logits);
  LogitMaps out = logits;
  PortableRng rng(noise.seed);
  const ImageSpec spec = logits.spec();

  // Dropout sites come from the clean plane so they do not depend on the
  // score noise draw.
  std::vector<std::pair<int, int>> sites;  // (row, col)
  if (noise.dropout_prob > 0.0) {
    const int window = std::max(1, static_cast<int>(std::ceil(3.0 * enc.sigma_h)));
    for (int r = 0; r < spec.height; r += enc.dy) {
      for (int c = 0; c < spec.width; ++c) {
        const double v = logits.score.at(c, r);
        if (v < 0.5) continue;
        bool is_max = true;
        for (int cc = std::max(0, c - window);
             cc <= std::min(spec.width - 1, c + window) && is_max; ++cc) {
          if (cc == c) continue;
          const double w = logits.score.at(cc, r);
          if (w > v || (w == v && cc < c)) is_max = false;
        }
        if (is_max) sites.push_back({r, c});
      }
    }
  }

  if (noise.score_noise_sd > 0.0) {
    for (double& s : out.score.data)
      s = std::clamp(s + noise.score_noise_sd * rng.normal(), 0.0, 1.0);
  }

  if (noise.dropout_prob > 0.0) {
    const int radius = static_cast<int>(std::ceil(3.0 * enc.sigma_h));
    const double r2max = 9.0 * enc.sigma_h * enc.sigma_h;
    for (const auto& [row, col] : sites) {
      if (!rng.bernoulli(noise.dropout_prob)) continue;
      for (int iy = std::max(0, row - radius);
           iy <= std::min(spec.height - 1, row + radius); ++iy) {
        for (int ix = std::max(0, col - radius);
             ix <= std::min(spec.width - 1, col + radius); ++ix) {
          const double d2 = static_cast<double>((ix - col) * (ix - col) +
                                                (iy - row) * (iy - row));
          if (d2 <= r2max) out.score.at(ix, iy) = 0.0;
        }
      }
    }
  }

  if (noise.offset_noise_sd > 0.0) {
    Plane* planes[3] = {&out.off_up, &out.off_mid, &out.off_down};
    const bool enabled[3] = {noise.offset_up, noise.offset_mid,
                             noise.offset_down};
    for (int i = 0; i < 3; ++i) {
      if (!enabled[i]) continue;
      for (double& v : planes[i]->data) v += noise.offset_noise_sd * rng.normal();
    }
  }
  return out;
}

}  // namespace lanekit
