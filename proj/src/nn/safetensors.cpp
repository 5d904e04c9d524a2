#include "prent/nn/safetensors.hpp"

#include "prent/error.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace prent::nn {

namespace {

float half_to_float(std::uint16_t h) {
  const std::uint32_t sign = (h & 0x8000u) << 16;
  std::uint32_t exp = (h >> 10) & 0x1F;
  std::uint32_t mant = h & 0x3FF;
  std::uint32_t bits;
  if (exp == 0) {
    if (mant == 0) {
      bits = sign;
    } else {
      exp = 127 - 15 + 1;
      while ((mant & 0x400) == 0) {
        mant <<= 1;
        --exp;
      }
      mant &= 0x3FF;
      bits = sign | (exp << 23) | (mant << 13);
    }
  } else if (exp == 0x1F) {
    bits = sign | 0x7F800000u | (mant << 13);
  } else {
    bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

std::uint64_t read_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

} // namespace

std::int64_t tensor::cols() const {
  std::int64_t n = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) n *= shape[i];
  return n;
}

safetensors_file::safetensors_file(const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw backend_unavailable("cannot open " + path.string());

  unsigned char len_bytes[8];
  if (!in.read(reinterpret_cast<char*>(len_bytes), 8))
    throw backend_unavailable("truncated safetensors header in " + path.string());
  const auto header_len = read_le64(len_bytes);
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len)))
    throw backend_unavailable("truncated safetensors header in " + path.string());

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw backend_unavailable("bad safetensors header in " + path.string() + ": " + e.what());
  }

  const auto data_start = static_cast<std::streamoff>(8 + header_len);
  for (const auto& [name, info] : meta.items()) {
    if (name == "__metadata__") continue;
    const auto dtype = info.at("dtype").get<std::string>();
    const auto offsets = info.at("data_offsets").get<std::vector<std::uint64_t>>();
    tensor t;
    t.shape = info.at("shape").get<std::vector<std::int64_t>>();
    std::size_t count = 1;
    for (auto d : t.shape) count *= static_cast<std::size_t>(d);

    const auto nbytes = offsets.at(1) - offsets.at(0);
    std::vector<unsigned char> raw(nbytes);
    in.seekg(data_start + static_cast<std::streamoff>(offsets[0]));
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(nbytes)))
      throw backend_unavailable("truncated tensor " + name + " in " + path.string());

    t.values.resize(count);
    if (dtype == "F32") {
      if (nbytes != count * 4) throw backend_unavailable("size mismatch for tensor " + name);
      std::memcpy(t.values.data(), raw.data(), nbytes);
    } else if (dtype == "F16" || dtype == "BF16") {
      if (nbytes != count * 2) throw backend_unavailable("size mismatch for tensor " + name);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint16_t h = static_cast<std::uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
        t.values[i] = dtype == "F16" ? half_to_float(h)
                                     : std::bit_cast<float>(static_cast<std::uint32_t>(h) << 16);
      }
    } else if (dtype == "I64") {
      // position_ids buffers; not weights, keep as floats for uniform access
      for (std::size_t i = 0; i < count; ++i) {
        std::int64_t v;
        std::memcpy(&v, raw.data() + 8 * i, 8);
        t.values[i] = static_cast<float>(v);
      }
    } else {
      throw backend_unavailable("unsupported dtype " + dtype + " for tensor " + name);
    }
    tensors_.emplace(name, std::move(t));
  }
}

const tensor& safetensors_file::at(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw backend_unavailable("checkpoint lacks tensor " + name);
  return it->second;
}

std::vector<std::string> safetensors_file::names() const {
  std::vector<std::string> out;
  out.reserve(tensors_.size());
  for (const auto& [k, v] : tensors_) out.push_back(k);
  return out;
}

} // namespace prent::nn
