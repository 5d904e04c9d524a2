#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prent::nn {

/// One subword with the byte range of the source text it covers.
struct piece {
  std::int32_t id;
  std::size_t begin;
  std::size_t end;
};

struct special_ids {
  std::int32_t cls = -1; ///< [CLS] or <s>
  std::int32_t sep = -1; ///< [SEP] or </s>
  std::int32_t pad = -1;
  std::int32_t unk = -1;
  std::int32_t mask = -1;
};

/// Model input for one sequence or one pair. segment is 0 for special and
/// first-sequence tokens and 1 for second-sequence tokens; source is -1 for
/// special tokens and otherwise the index (0 or 1) of the text a token came from.
struct encoding {
  std::vector<std::int32_t> ids;
  std::vector<std::int32_t> segment;
  std::vector<std::int32_t> source;
  std::vector<std::pair<std::size_t, std::size_t>> offsets;

  std::size_t size() const { return ids.size(); }
};

class tokenizer {
public:
  virtual ~tokenizer() = default;

  virtual std::vector<piece> tokenize(std::string_view text) const = 0;

  /// printable form of a vocabulary entry, whitespace-trimmed
  virtual std::string decode_token(std::int32_t id) const = 0;

  virtual std::size_t vocab_size() const = 0;

  /// true when the model's mask token absorbs the whitespace in front of it
  virtual bool mask_absorbs_left_space() const = 0;

  /// number of special tokens wrapping one sequence / a pair
  virtual std::size_t single_overhead() const = 0;
  virtual std::size_t pair_overhead() const = 0;

  virtual encoding build_single(const std::vector<piece>& a) const = 0;
  virtual encoding build_pair(const std::vector<piece>& a, const std::vector<piece>& b) const = 0;

  const special_ids& specials() const { return specials_; }

protected:
  special_ids specials_;
};

/// BERT-style tokenizer: text cleanup, optional lowercasing with accent
/// stripping, whitespace and punctuation splitting, greedy longest-match
/// WordPiece with "##" continuations.
class wordpiece_tokenizer final : public tokenizer {
public:
  wordpiece_tokenizer(const std::filesystem::path& vocab_txt, bool lower_case);

  std::vector<piece> tokenize(std::string_view text) const override;
  std::string decode_token(std::int32_t id) const override;
  std::size_t vocab_size() const override { return vocab_.size(); }
  bool mask_absorbs_left_space() const override { return false; }
  std::size_t single_overhead() const override { return 2; }
  std::size_t pair_overhead() const override { return 3; }
  encoding build_single(const std::vector<piece>& a) const override;
  encoding build_pair(const std::vector<piece>& a, const std::vector<piece>& b) const override;

private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::int32_t> index_;
  bool lower_case_;
};

/// GPT-2/RoBERTa byte-level BPE with offsets trimmed of surrounding whitespace.
class byte_bpe_tokenizer final : public tokenizer {
public:
  byte_bpe_tokenizer(const std::filesystem::path& vocab_json, const std::filesystem::path& merges_txt);

  std::vector<piece> tokenize(std::string_view text) const override;
  std::string decode_token(std::int32_t id) const override;
  std::size_t vocab_size() const override { return vocab_.size(); }
  bool mask_absorbs_left_space() const override { return true; }
  std::size_t single_overhead() const override { return 2; }
  std::size_t pair_overhead() const override { return 4; }
  encoding build_single(const std::vector<piece>& a) const override;
  encoding build_pair(const std::vector<piece>& a, const std::vector<piece>& b) const override;

  /// split into pre-tokens following the GPT-2 pattern; byte ranges into text
  static std::vector<std::pair<std::size_t, std::size_t>> pre_tokenize(std::string_view text);

private:
  std::vector<std::string> bpe(const std::string& word) const;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::map<std::pair<std::string, std::string>, int> ranks_;
  std::string byte_to_symbol_[256];
  std::unordered_map<std::string, unsigned char> symbol_to_byte_;
};

/// Picks and loads the tokenizer that matches a checkpoint directory.
std::unique_ptr<tokenizer> load_tokenizer(const std::filesystem::path& dir,
                                          const std::string& model_type);

} // namespace prent::nn
