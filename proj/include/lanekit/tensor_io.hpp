#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanekit/maps.hpp"

namespace lanekit {

// Minimal binary tensor container ("LKT1"):
//   bytes 0..3   magic "LKT1"
//   byte  4      dtype code (1 = f32, 2 = f64)
//   byte  5      rank (2 = one plane [height, width],
//                      3 = stacked planes [planes, height, width])
//   bytes 6..15  reserved, zero
//   then         rank little-endian u32 dims, then the row-major payload,
//                little-endian
// Rank-3 logit files stack planes in the order score, off_up, off_mid,
// off_down.
enum class TensorDtype : std::uint8_t { f32 = 1, f64 = 2 };

struct Tensor {
  TensorDtype dtype = TensorDtype::f64;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;  // f32 payloads load losslessly into doubles
};

void write_tensor(const std::string& path, const Tensor& tensor);
Tensor read_tensor(const std::string& path);

Tensor plane_to_tensor(const Plane& plane,
                       TensorDtype dtype = TensorDtype::f64);
Plane tensor_to_plane(const Tensor& tensor);

Tensor logits_to_tensor(const LogitMaps& logits,
                        TensorDtype dtype = TensorDtype::f64);
LogitMaps tensor_to_logits(const Tensor& tensor);

void write_plane(const std::string& path, const Plane& plane,
                 TensorDtype dtype = TensorDtype::f64);
Plane read_plane(const std::string& path);

void write_logits(const std::string& path, const LogitMaps& logits,
                  TensorDtype dtype = TensorDtype::f64);
LogitMaps read_logits(const std::string& path);

}  // namespace lanekit
