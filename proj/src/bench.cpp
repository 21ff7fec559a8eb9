#include "lanekit/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

namespace lanekit {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double p95(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const size_t idx = static_cast<size_t>(
      std::max<long>(0, static_cast<long>(std::ceil(0.95 * v.size())) - 1));
  return v[idx];
}

void hash_mix(std::uint64_t& h, std::uint64_t v) {
  // FNV-1a over 8-byte words
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ull;
  }
}

void hash_lanes(std::uint64_t& h, const std::vector<DecodedLane>& lanes) {
  hash_mix(h, lanes.size());
  for (const DecodedLane& lane : lanes) {
    hash_mix(h, lane.points.size());
    for (const ImagePoint& p : lane.points) {
      hash_mix(h, std::bit_cast<std::uint64_t>(p.x));
      hash_mix(h, std::bit_cast<std::uint64_t>(p.y));
    }
  }
}

}  // namespace

BenchReport run_bench(const RunConfig& cfg) {
  cfg.validate();
  BenchReport report;
  report.scenes = cfg.bench_scenes;
  report.image = cfg.image;
  report.n_lanes = cfg.scene.n_lanes;
  report.result_hash = 14695981039346656037ull;

  using clock = std::chrono::steady_clock;
  const bool noisy = cfg.noise.score_noise_sd > 0.0 ||
                     cfg.noise.offset_noise_sd > 0.0 ||
                     cfg.noise.dropout_prob > 0.0;

  for (int i = 0; i < cfg.bench_scenes; ++i) {
    SceneSpec scene = cfg.scene;
    scene.seed = cfg.scene.seed + static_cast<std::uint64_t>(i);
    const std::vector<LaneCurve> curves = gen_scene(scene);
    LogitMaps logits = render_ideal(curves, cfg.image, cfg.encoder);
    if (noisy) {
      NoiseSpec noise = cfg.noise;
      noise.seed = cfg.noise.seed + static_cast<std::uint64_t>(i);
      logits = perturb(logits, noise, cfg.encoder);
    }
    if (i == 0) {  // warm up caches before the first timed run
      greedy_decode(logits, cfg.decoder);
      efficient_decode(logits, cfg.decoder);
    }

    const auto t0 = clock::now();
    const std::vector<DecodedLane> greedy = greedy_decode(logits, cfg.decoder);
    const auto t1 = clock::now();
    const std::vector<DecodedLane> efficient =
        efficient_decode(logits, cfg.decoder);
    const auto t2 = clock::now();

    report.greedy_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
    report.efficient_ms.push_back(
        std::chrono::duration<double, std::milli>(t2 - t1).count());
    for (const DecodedLane& lane : greedy)
      report.greedy_points += static_cast<long long>(lane.points.size());
    for (const DecodedLane& lane : efficient)
      report.efficient_points += static_cast<long long>(lane.points.size());
    hash_lanes(report.result_hash, greedy);
    hash_lanes(report.result_hash, efficient);
  }

  report.greedy_median_ms = median(report.greedy_ms);
  report.greedy_p95_ms = p95(report.greedy_ms);
  report.efficient_median_ms = median(report.efficient_ms);
  report.efficient_p95_ms = p95(report.efficient_ms);
  report.speedup = report.efficient_median_ms > 0.0
                       ? report.greedy_median_ms / report.efficient_median_ms
                       : 0.0;
  return report;
}

}  // namespace lanekit
