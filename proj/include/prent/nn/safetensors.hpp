#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace prent::nn {

/// A tensor decoded to float32, row-major, with its original shape.
struct tensor {
  std::vector<std::int64_t> shape;
  std::vector<float> values;

  std::int64_t rows() const { return shape.empty() ? 1 : shape.front(); }
  std::int64_t cols() const;
};

/// Reader for the safetensors container: an 8-byte little-endian header
/// length, a JSON header mapping names to {dtype, shape, data_offsets}, then
/// the raw buffer. F32, F16 and BF16 payloads are widened to float32.
class safetensors_file {
public:
  explicit safetensors_file(const std::filesystem::path& path);

  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  const tensor& at(const std::string& name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, tensor> tensors_;
};

} // namespace prent::nn
