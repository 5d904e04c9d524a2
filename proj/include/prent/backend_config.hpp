#pragma once

#include "prent/backends.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prent {

enum class backend_kind { checkpoint, mock };

/// Which models and fixtures to run with. Read from a JSON file and then
/// overridden by PRENT_* environment variables.
struct backend_config {
  backend_kind kind = backend_kind::checkpoint;
  std::string fill_model_id = "distilbert-base-uncased";
  std::string nli_model_id = "roberta-large-mnli";
  std::string qa_model_id = "deepset/roberta-base-squad2";
  std::string device = "cpu";
  std::size_t max_seq_len = 512;
  std::vector<std::filesystem::path> mock_fixtures;
  /// directory holding checkpoints by identifier, searched before the HF cache
  std::optional<std::filesystem::path> model_root;

  static backend_config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// PRENT_BACKEND, PRENT_FILL_MODEL, PRENT_NLI_MODEL, PRENT_QA_MODEL,
  /// PRENT_DEVICE, PRENT_MAX_SEQ_LEN, PRENT_MOCK_FIXTURES (':'-separated),
  /// PRENT_MODEL_ROOT
  void apply_environment();

  /// file (if given) then environment; validates the result
  static backend_config load(const std::optional<std::filesystem::path>& file);

  void validate() const;
};

/// Locates a checkpoint directory for an identifier: an existing path, then
/// <model_root>/<id> (also with '/' replaced by "--"), then the Hugging Face
/// hub cache. Returns nullopt when nothing is found.
std::optional<std::filesystem::path>
find_checkpoint(const std::string& id, const std::optional<std::filesystem::path>& model_root);

/// bit set of the capabilities a caller needs
enum capability : unsigned { need_fill = 1u, need_nli = 2u, need_qa = 4u, need_all = 7u };

/// Builds the requested backends; members not requested stay empty.
backends make_backends(const backend_config& config, unsigned needed = need_all);

} // namespace prent
