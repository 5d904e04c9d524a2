#include "prent/nn/encoder.hpp"

#include "prent/text.hpp"

#include <fstream>

namespace prent::nn {

activation parse_activation(const std::string& name) {
  if (name == "gelu") return activation::gelu;
  if (name == "gelu_new" || name == "gelu_pytorch_tanh" || name == "gelu_fast")
    return activation::gelu_tanh;
  if (name == "relu") return activation::relu;
  if (name == "tanh") return activation::tanh;
  throw backend_unavailable("unsupported activation " + name);
}

namespace {

nlohmann::json read_config(const std::filesystem::path& dir) {
  std::ifstream in(dir / "config.json");
  if (!in) throw backend_unavailable("no config.json in " + dir.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (!j.is_object()) throw backend_unavailable("unreadable config.json in " + dir.string());
  return j;
}

std::filesystem::path weights_path(const std::filesystem::path& dir) {
  const auto p = dir / "model.safetensors";
  if (!std::filesystem::exists(p))
    throw backend_unavailable("no model.safetensors in " + dir.string() +
                              " (only the safetensors format is supported)");
  return p;
}

} // namespace

checkpoint::checkpoint(const std::filesystem::path& dir)
    : dir_(dir), config_(read_config(dir)), weights_(weights_path(dir)) {
  model_type_ = config_.value("model_type", "");
  if (model_type_ != "bert" && model_type_ != "roberta" && model_type_ != "distilbert")
    throw backend_unavailable("unsupported model type '" + model_type_ + "' in " + dir.string());
  prefix_ = model_type_ + ".";
}

bool checkpoint::has(const std::string& name) const {
  return weights_.contains(prefix_ + name) || weights_.contains(name);
}

const tensor& checkpoint::weight(const std::string& name) const {
  if (weights_.contains(prefix_ + name)) return weights_.at(prefix_ + name);
  return weights_.at(name);
}

std::optional<int> checkpoint::label_index(const std::string& label) const {
  if (!config_.contains("id2label") || !config_["id2label"].is_object()) return std::nullopt;
  const auto want = text::to_lower_ascii(label);
  for (const auto& [key, value] : config_["id2label"].items()) {
    if (value.is_string() && text::to_lower_ascii(value.get<std::string>()) == want)
      return std::stoi(key);
  }
  return std::nullopt;
}

int checkpoint::config_int(const char* key, int fallback) const {
  auto it = config_.find(key);
  return it != config_.end() && it->is_number_integer() ? it->get<int>() : fallback;
}

double checkpoint::layer_norm_eps() const {
  if (model_type_ == "distilbert") return 1e-12;
  auto it = config_.find("layer_norm_eps");
  return it != config_.end() && it->is_number() ? it->get<double>() : 1e-12;
}

} // namespace prent::nn
