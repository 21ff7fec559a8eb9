#include "lanekit/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "lanekit/error.hpp"

namespace lanekit {

namespace {

constexpr char kMagic[4] = {'L', 'K', 'T', '1'};
constexpr size_t kFixedHeader = 16;

void put_u32_le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

size_t dtype_size(TensorDtype d) {
  return d == TensorDtype::f32 ? 4 : 8;
}

}  // namespace

void write_tensor(const std::string& path, const Tensor& tensor) {
  if (tensor.dtype != TensorDtype::f32 && tensor.dtype != TensorDtype::f64)
    throw std::invalid_argument("unsupported tensor dtype");
  if (tensor.dims.size() != 2 && tensor.dims.size() != 3)
    throw std::invalid_argument("tensor rank must be 2 or 3");
  size_t count = 1;
  for (std::uint32_t d : tensor.dims) {
    if (d == 0) throw std::invalid_argument("tensor dims must be positive");
    count *= d;
  }
  if (count != tensor.values.size())
    throw std::invalid_argument("tensor value count does not match dims");

  std::string bytes;
  bytes.reserve(kFixedHeader + 4 * tensor.dims.size() +
                count * dtype_size(tensor.dtype));
  bytes.append(kMagic, 4);
  bytes.push_back(static_cast<char>(tensor.dtype));
  bytes.push_back(static_cast<char>(tensor.dims.size()));
  bytes.append(kFixedHeader - 6, '\0');
  for (std::uint32_t d : tensor.dims) put_u32_le(bytes, d);
  if (tensor.dtype == TensorDtype::f32) {
    for (double v : tensor.values) {
      const std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      put_u32_le(bytes, u);
    }
  } else {
    for (double v : tensor.values) {
      const std::uint64_t u = std::bit_cast<std::uint64_t>(v);
      put_u32_le(bytes, static_cast<std::uint32_t>(u & 0xffffffffu));
      put_u32_le(bytes, static_cast<std::uint32_t>(u >> 32));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing: " + path);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());

  if (bytes.size() < kFixedHeader || std::memcmp(p, kMagic, 4) != 0)
    throw ParseError("not a LKT1 tensor file: " + path);
  const auto dtype = static_cast<TensorDtype>(p[4]);
  if (dtype != TensorDtype::f32 && dtype != TensorDtype::f64)
    throw ParseError("unsupported dtype code in " + path);
  const int rank = p[5];
  if (rank != 2 && rank != 3)
    throw ParseError("unsupported tensor rank in " + path);
  if (bytes.size() < kFixedHeader + 4 * static_cast<size_t>(rank))
    throw ParseError("truncated tensor header in " + path);

  Tensor t;
  t.dtype = dtype;
  size_t count = 1;
  for (int i = 0; i < rank; ++i) {
    const std::uint32_t d = get_u32_le(p + kFixedHeader + 4 * i);
    if (d == 0) throw ParseError("zero dimension in " + path);
    t.dims.push_back(d);
    count *= d;
  }
  const size_t payload_at = kFixedHeader + 4 * static_cast<size_t>(rank);
  if (bytes.size() != payload_at + count * dtype_size(dtype))
    throw ParseError("payload size mismatch in " + path);

  t.values.resize(count);
  const unsigned char* q = p + payload_at;
  if (dtype == TensorDtype::f32) {
    for (size_t i = 0; i < count; ++i, q += 4)
      t.values[i] = static_cast<double>(std::bit_cast<float>(get_u32_le(q)));
  } else {
    for (size_t i = 0; i < count; ++i, q += 8) {
      const std::uint64_t u = static_cast<std::uint64_t>(get_u32_le(q)) |
                              (static_cast<std::uint64_t>(get_u32_le(q + 4))
                               << 32);
      t.values[i] = std::bit_cast<double>(u);
    }
  }
  return t;
}

Tensor plane_to_tensor(const Plane& plane, TensorDtype dtype) {
  Tensor t;
  t.dtype = dtype;
  t.dims = {static_cast<std::uint32_t>(plane.height),
            static_cast<std::uint32_t>(plane.width)};
  t.values = plane.data;
  return t;
}

Plane tensor_to_plane(const Tensor& tensor) {
  if (tensor.dims.size() != 2)
    throw ParseError("expected a rank-2 tensor for a single plane");
  Plane plane(static_cast<int>(tensor.dims[1]),
              static_cast<int>(tensor.dims[0]));
  plane.data = tensor.values;
  return plane;
}

Tensor logits_to_tensor(const LogitMaps& logits, TensorDtype dtype) {
  validate_logits(logits);
  Tensor t;
  t.dtype = dtype;
  t.dims = {4, static_cast<std::uint32_t>(logits.score.height),
            static_cast<std::uint32_t>(logits.score.width)};
  t.values.reserve(logits.score.data.size() * 4);
  for (const Plane* plane :
       {&logits.score, &logits.off_up, &logits.off_mid, &logits.off_down})
    t.values.insert(t.values.end(), plane->data.begin(), plane->data.end());
  return t;
}

LogitMaps tensor_to_logits(const Tensor& tensor) {
  if (tensor.dims.size() != 3 || tensor.dims[0] != 4)
    throw ParseError("logit tensors must be rank 3 with 4 planes");
  const int h = static_cast<int>(tensor.dims[1]);
  const int w = static_cast<int>(tensor.dims[2]);
  const size_t plane_size = static_cast<size_t>(w) * h;
  LogitMaps out{Plane(w, h), Plane(w, h), Plane(w, h), Plane(w, h)};
  Plane* planes[4] = {&out.score, &out.off_up, &out.off_mid, &out.off_down};
  for (int i = 0; i < 4; ++i)
    std::copy(tensor.values.begin() + static_cast<long>(i * plane_size),
              tensor.values.begin() + static_cast<long>((i + 1) * plane_size),
              planes[i]->data.begin());
  return out;
}

void write_plane(const std::string& path, const Plane& plane,
                 TensorDtype dtype) {
  write_tensor(path, plane_to_tensor(plane, dtype));
}

Plane read_plane(const std::string& path) {
  return tensor_to_plane(read_tensor(path));
}

void write_logits(const std::string& path, const LogitMaps& logits,
                  TensorDtype dtype) {
  write_tensor(path, logits_to_tensor(logits, dtype));
}

LogitMaps read_logits(const std::string& path) {
  return tensor_to_logits(read_tensor(path));
}

}  // namespace lanekit
