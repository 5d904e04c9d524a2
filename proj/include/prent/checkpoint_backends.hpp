#pragma once

#include "prent/backends.hpp"

#include <filesystem>
#include <memory>

// Backends that run a local transformer checkpoint on the CPU.
namespace prent {

struct checkpoint_options {
  /// upper bound on input tokens; the checkpoint's own position table also applies
  std::size_t max_seq_len = 512;
  /// reported by model_id(); defaults to the directory name
  std::string model_id;
};

std::shared_ptr<const mask_filler> load_checkpoint_filler(const std::filesystem::path& dir,
                                                          const checkpoint_options& opts = {});

std::shared_ptr<const entailment_model> load_checkpoint_nli(const std::filesystem::path& dir,
                                                            const checkpoint_options& opts = {});

/// longest span considered, in tokens
inline constexpr std::size_t max_answer_tokens = 15;

std::shared_ptr<const question_answerer> load_checkpoint_qa(const std::filesystem::path& dir,
                                                            const checkpoint_options& opts = {});

} // namespace prent
