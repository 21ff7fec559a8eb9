#pragma once

#include <cstdint>
#include <vector>

#include "lanekit/run_config.hpp"

namespace lanekit {

// Wall-time comparison of the two decoders over seeded synthetic scenes.
// Decoded results are deterministic (the hash covers both decoders' output);
// only the timings vary between runs.
struct BenchReport {
  int scenes = 0;
  ImageSpec image;
  int n_lanes = 0;
  std::vector<double> greedy_ms;     // per scene
  std::vector<double> efficient_ms;  // per scene
  double greedy_median_ms = 0.0;
  double greedy_p95_ms = 0.0;
  double efficient_median_ms = 0.0;
  double efficient_p95_ms = 0.0;
  double speedup = 0.0;  // greedy median / efficient median
  long long greedy_points = 0;
  long long efficient_points = 0;
  std::uint64_t result_hash = 0;
};

BenchReport run_bench(const RunConfig& cfg);

}  // namespace lanekit
