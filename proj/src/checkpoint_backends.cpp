#include "prent/checkpoint_backends.hpp"

#include "prent/error.hpp"
#include "prent/nn/encoder.hpp"
#include "prent/nn/tokenizer.hpp"
#include "prent/text.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace prent {

namespace {

using nn::piece;

struct loaded_model {
  nn::checkpoint ckpt;
  std::unique_ptr<nn::tokenizer> tok;
  nn::transformer_encoder<float> encoder;
  std::size_t limit;
  std::string id;

  loaded_model(const std::filesystem::path& dir, const checkpoint_options& opts)
      : ckpt(dir), tok(nn::load_tokenizer(dir, ckpt.model_type())),
        encoder(ckpt.encoder<float>()),
        limit(std::min(opts.max_seq_len, encoder.max_tokens())),
        id(opts.model_id.empty() ? dir.filename().string() : opts.model_id) {}

  nn::matrix<float> run(const nn::encoding& enc) const { return encoder(enc.ids, enc.segment); }
};

/// Drops pieces from the front of `cut` so that fixed + cut fits in budget.
void truncate_front(std::vector<piece>& cut, std::size_t fixed, std::size_t budget,
                    const char* what) {
  if (fixed > budget) throw input_too_long(std::string(what) + " alone exceeds the model window");
  const std::size_t room = budget - fixed;
  if (cut.size() > room) cut.erase(cut.begin(), cut.end() - static_cast<std::ptrdiff_t>(room));
}

class checkpoint_filler final : public mask_filler {
public:
  checkpoint_filler(const std::filesystem::path& dir, const checkpoint_options& opts)
      : model_(dir, opts), head_(model_.ckpt.masked_lm_head<float>()) {}

  std::vector<mask_fill_result> fill_mask(std::string_view input, std::size_t k) const override {
    require_single_mask(input);
    if (k == 0) throw std::invalid_argument("k must be positive");
    const auto at = input.find(mask_marker);
    std::string left(input.substr(0, at));
    const std::string_view right = input.substr(at + mask_marker.size());
    if (model_.tok->mask_absorbs_left_space()) {
      while (!left.empty() && std::isspace(static_cast<unsigned char>(left.back()))) left.pop_back();
    }
    auto before = model_.tok->tokenize(left);
    auto after = model_.tok->tokenize(right);
    const std::size_t fixed = model_.tok->single_overhead() + 1 + after.size();
    truncate_front(before, fixed, model_.limit, "template");

    std::vector<piece> pieces = before;
    const auto mask_pos = pieces.size() + 1;
    pieces.push_back({model_.tok->specials().mask, 0, 0});
    pieces.insert(pieces.end(), after.begin(), after.end());
    const auto enc = model_.tok->build_single(pieces);

    const auto hidden = model_.run(enc);
    const Eigen::VectorXd probs = nn::softmax(head_.logits(hidden, static_cast<Eigen::Index>(mask_pos)));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(probs.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return probs[a] > probs[b]; });

    std::vector<mask_fill_result> out;
    std::unordered_set<std::string> seen;
    for (const auto idx : order) {
      if (out.size() == k) break;
      auto token = model_.tok->decode_token(static_cast<std::int32_t>(idx));
      if (token.empty() || !seen.insert(token).second) continue;
      out.push_back({std::move(token), probs[idx]});
    }
    return out;
  }

  std::string model_id() const override { return model_.id; }

private:
  loaded_model model_;
  nn::mlm_head<float> head_;
};

class checkpoint_nli final : public entailment_model {
public:
  checkpoint_nli(const std::filesystem::path& dir, const checkpoint_options& opts)
      : model_(dir, opts), head_(model_.ckpt.classifier_head<float>()) {
    const auto idx = model_.ckpt.label_index("entailment");
    if (!idx) throw backend_unavailable(dir.string() + " has no ENTAILMENT label");
    entail_ = *idx;
  }

  entailment_score entailment_probability(std::string_view premise,
                                          std::string_view hypothesis) const override {
    auto a = model_.tok->tokenize(premise);
    const auto b = model_.tok->tokenize(hypothesis);
    truncate_front(a, model_.tok->pair_overhead() + b.size(), model_.limit, "hypothesis");
    const auto enc = model_.tok->build_pair(a, b);
    const auto probs = nn::softmax(head_.logits(model_.run(enc)));
    if (entail_ >= probs.size()) throw backend_error("classifier has fewer outputs than labels");
    return {probs[entail_]};
  }

  std::string model_id() const override { return model_.id; }

private:
  loaded_model model_;
  nn::sequence_classifier_head<float> head_;
  Eigen::Index entail_ = 0;
};

class checkpoint_qa final : public question_answerer {
public:
  checkpoint_qa(const std::filesystem::path& dir, const checkpoint_options& opts)
      : model_(dir, opts), head_(model_.ckpt.question_answering_head<float>()) {}

  span_answer extractive_answer(std::string_view question, std::string_view context,
                                double min_confidence) const override {
    const auto q = model_.tok->tokenize(question);
    auto c = model_.tok->tokenize(context);
    truncate_front(c, model_.tok->pair_overhead() + q.size(), model_.limit, "question");
    const auto enc = model_.tok->build_pair(q, c);
    const nn::matrix<float> logits = head_.logits(model_.run(enc));
    const auto n = static_cast<Eigen::Index>(enc.size());

    // only context tokens and the leading special token take part
    Eigen::VectorXd start(n), end(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      const bool keep = t == 0 || enc.source[static_cast<std::size_t>(t)] == 1;
      start[t] = keep ? logits(t, 0) : -10000.0;
      end[t] = keep ? logits(t, 1) : -10000.0;
    }
    Eigen::VectorXd ps = nn::softmax(start);
    Eigen::VectorXd pe = nn::softmax(end);
    const double null_score = ps[0] * pe[0];
    ps[0] = pe[0] = 0.0;

    double best = -1.0;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (enc.source[static_cast<std::size_t>(i)] != 1) continue;
      const auto last = std::min<Eigen::Index>(n - 1, i + static_cast<Eigen::Index>(max_answer_tokens) - 1);
      for (Eigen::Index j = i; j <= last; ++j) {
        if (enc.source[static_cast<std::size_t>(j)] != 1) continue;
        const double score = ps[i] * pe[j];
        if (score > best) {
          best = score;
          bi = i;
          bj = j;
        }
      }
    }
    if (best < 0.0) throw no_answer("context is empty");
    if (null_score > best) throw no_answer("the model prefers the null answer");
    if (best < min_confidence) throw no_answer("best span is below the confidence floor");
    const auto b = enc.offsets[static_cast<std::size_t>(bi)].first;
    const auto e = enc.offsets[static_cast<std::size_t>(bj)].second;
    return {std::string(context.substr(b, e - b)), b, e, best};
  }

  std::string model_id() const override { return model_.id; }

private:
  loaded_model model_;
  nn::span_head<float> head_;
};

} // namespace

std::shared_ptr<const mask_filler> load_checkpoint_filler(const std::filesystem::path& dir,
                                                          const checkpoint_options& opts) {
  return std::make_shared<checkpoint_filler>(dir, opts);
}

std::shared_ptr<const entailment_model> load_checkpoint_nli(const std::filesystem::path& dir,
                                                            const checkpoint_options& opts) {
  return std::make_shared<checkpoint_nli>(dir, opts);
}

std::shared_ptr<const question_answerer> load_checkpoint_qa(const std::filesystem::path& dir,
                                                            const checkpoint_options& opts) {
  return std::make_shared<checkpoint_qa>(dir, opts);
}

} // namespace prent
