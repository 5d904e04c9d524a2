#pragma once

#include "prent/error.hpp"
#include "prent/nn/ops.hpp"
#include "prent/nn/safetensors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Post-LayerNorm transformer encoders as found in BERT, RoBERTa and DistilBERT
// checkpoints, plus the task heads used by the backends.
namespace prent::nn {

enum class activation { gelu, gelu_tanh, relu, tanh };

template <typename Derived>
matrix<typename Derived::Scalar> activate(activation kind, const Eigen::MatrixBase<Derived>& x) {
  switch (kind) {
  case activation::gelu: return gelu(x);
  case activation::gelu_tanh: return gelu_tanh(x);
  case activation::relu: return relu(x);
  case activation::tanh: return x.array().tanh().matrix();
  }
  return x;
}

activation parse_activation(const std::string& name);

template <typename Scalar>
struct encoder_layer {
  linear<Scalar> query, key, value, attention_out;
  layer_norm<Scalar> attention_norm;
  linear<Scalar> feed_forward_in, feed_forward_out;
  layer_norm<Scalar> output_norm;
};

template <typename Scalar>
class transformer_encoder {
public:
  matrix<Scalar> word_embeddings;
  matrix<Scalar> position_embeddings;
  matrix<Scalar> token_type_embeddings; ///< empty for DistilBERT
  layer_norm<Scalar> embedding_norm;
  std::vector<encoder_layer<Scalar>> layers;
  int heads = 1;
  activation hidden_activation = activation::gelu;
  int position_offset = 0; ///< first position id (RoBERTa counts from padding_idx + 1)

  /// longest sequence the position table allows
  std::size_t max_tokens() const {
    return static_cast<std::size_t>(position_embeddings.rows() - position_offset);
  }

  /// Hidden states (tokens x hidden) of one unpadded sequence.
  matrix<Scalar> operator()(std::span<const std::int32_t> ids,
                            std::span<const std::int32_t> segments = {}) const {
    const auto n = static_cast<Eigen::Index>(ids.size());
    if (ids.size() > max_tokens()) throw input_too_long("sequence exceeds the position table");
    const auto hidden = word_embeddings.cols();
    matrix<Scalar> x(n, hidden);
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto id = ids[static_cast<std::size_t>(t)];
      if (id < 0 || id >= word_embeddings.rows()) throw backend_error("token id out of range");
      x.row(t) = word_embeddings.row(id) + position_embeddings.row(t + position_offset);
      if (token_type_embeddings.size() != 0) {
        const auto seg = segments.empty() ? 0 : segments[static_cast<std::size_t>(t)];
        x.row(t) += token_type_embeddings.row(std::min<Eigen::Index>(seg, token_type_embeddings.rows() - 1));
      }
    }
    x = embedding_norm(x);

    const Eigen::Index head_dim = hidden / heads;
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(head_dim));
    for (const auto& layer : layers) {
      const matrix<Scalar> q = layer.query(x);
      const matrix<Scalar> k = layer.key(x);
      const matrix<Scalar> v = layer.value(x);
      matrix<Scalar> context(n, hidden);
      for (int h = 0; h < heads; ++h) {
        const auto c0 = h * head_dim;
        matrix<Scalar> scores =
            (q.middleCols(c0, head_dim) * k.middleCols(c0, head_dim).transpose()) * scale;
        softmax_rows(scores);
        context.middleCols(c0, head_dim) = scores * v.middleCols(c0, head_dim);
      }
      x = layer.attention_norm(layer.attention_out(context) + x);
      const matrix<Scalar> inner = activate(hidden_activation, layer.feed_forward_in(x));
      x = layer.output_norm(layer.feed_forward_out(inner) + x);
    }
    return x;
  }
};

/// Masked-LM prediction head: transform, activation, norm, vocabulary projection.
template <typename Scalar>
struct mlm_head {
  linear<Scalar> transform;
  activation transform_activation = activation::gelu;
  layer_norm<Scalar> norm;
  linear<Scalar> decoder;

  vector<Scalar> logits(const matrix<Scalar>& hidden, Eigen::Index row) const {
    const matrix<Scalar> h = norm(activate(transform_activation, transform(hidden.row(row))));
    return decoder(h).row(0).transpose();
  }
};

/// Classification head reading the first token. The pooled variants differ in
/// the activation between the two projections.
template <typename Scalar>
struct sequence_classifier_head {
  linear<Scalar> pool;
  activation pool_activation = activation::tanh;
  linear<Scalar> out;

  vector<Scalar> logits(const matrix<Scalar>& hidden) const {
    const matrix<Scalar> pooled = activate(pool_activation, pool(hidden.row(0)));
    return out(pooled).row(0).transpose();
  }
};

/// Start/end logits of extractive QA, (tokens x 2).
template <typename Scalar>
struct span_head {
  linear<Scalar> out;

  matrix<Scalar> logits(const matrix<Scalar>& hidden) const { return out(hidden); }
};

/// A checkpoint directory: config.json plus model.safetensors. Weight names
/// are looked up with and without the architecture prefix ("bert.", ...).
class checkpoint {
public:
  explicit checkpoint(const std::filesystem::path& dir);

  const std::filesystem::path& directory() const { return dir_; }
  const nlohmann::json& config() const { return config_; }
  const std::string& model_type() const { return model_type_; }

  bool has(const std::string& name) const;
  const tensor& weight(const std::string& name) const;

  /// label index whose id2label entry reads `label` (case-insensitive)
  std::optional<int> label_index(const std::string& label) const;

  template <typename Scalar>
  transformer_encoder<Scalar> encoder() const;
  template <typename Scalar>
  mlm_head<Scalar> masked_lm_head() const;
  template <typename Scalar>
  sequence_classifier_head<Scalar> classifier_head() const;
  template <typename Scalar>
  span_head<Scalar> question_answering_head() const;

  template <typename Scalar>
  matrix<Scalar> dense(const std::string& name) const {
    const auto& t = weight(name);
    matrix<Scalar> m(t.rows(), t.cols());
    std::copy(t.values.begin(), t.values.end(), m.data());
    return m;
  }
  template <typename Scalar>
  vector<Scalar> column(const std::string& name) const {
    const auto& t = weight(name);
    vector<Scalar> v(static_cast<Eigen::Index>(t.values.size()));
    std::copy(t.values.begin(), t.values.end(), v.data());
    return v;
  }

private:
  template <typename Scalar>
  linear<Scalar> affine(const std::string& base) const {
    linear<Scalar> l{dense<Scalar>(base + ".weight"), {}};
    if (has(base + ".bias")) l.bias = column<Scalar>(base + ".bias");
    return l;
  }
  template <typename Scalar>
  layer_norm<Scalar> norm(const std::string& base, double eps) const {
    const bool modern = has(base + ".weight");
    return {column<Scalar>(base + (modern ? ".weight" : ".gamma")),
            column<Scalar>(base + (modern ? ".bias" : ".beta")), static_cast<Scalar>(eps)};
  }
  int config_int(const char* key, int fallback) const;
  double layer_norm_eps() const;

  std::filesystem::path dir_;
  nlohmann::json config_;
  std::string model_type_;
  std::string prefix_;
  safetensors_file weights_;
};

template <typename Scalar>
transformer_encoder<Scalar> checkpoint::encoder() const {
  transformer_encoder<Scalar> enc;
  const double eps = layer_norm_eps();
  enc.word_embeddings = dense<Scalar>("embeddings.word_embeddings.weight");
  enc.position_embeddings = dense<Scalar>("embeddings.position_embeddings.weight");
  if (has("embeddings.token_type_embeddings.weight"))
    enc.token_type_embeddings = dense<Scalar>("embeddings.token_type_embeddings.weight");
  enc.embedding_norm = norm<Scalar>("embeddings.LayerNorm", eps);
  if (model_type_ == "distilbert") {
    enc.heads = config_int("n_heads", 12);
    enc.hidden_activation = parse_activation(config_.value("activation", "gelu"));
    const int n = config_int("n_layers", 6);
    for (int i = 0; i < n; ++i) {
      const auto p = "transformer.layer." + std::to_string(i) + ".";
      enc.layers.push_back({affine<Scalar>(p + "attention.q_lin"), affine<Scalar>(p + "attention.k_lin"),
                            affine<Scalar>(p + "attention.v_lin"), affine<Scalar>(p + "attention.out_lin"),
                            norm<Scalar>(p + "sa_layer_norm", eps), affine<Scalar>(p + "ffn.lin1"),
                            affine<Scalar>(p + "ffn.lin2"), norm<Scalar>(p + "output_layer_norm", eps)});
    }
  } else {
    enc.heads = config_int("num_attention_heads", 12);
    enc.hidden_activation = parse_activation(config_.value("hidden_act", "gelu"));
    if (model_type_ == "roberta") enc.position_offset = config_int("pad_token_id", 1) + 1;
    const int n = config_int("num_hidden_layers", 12);
    for (int i = 0; i < n; ++i) {
      const auto p = "encoder.layer." + std::to_string(i) + ".";
      enc.layers.push_back({affine<Scalar>(p + "attention.self.query"), affine<Scalar>(p + "attention.self.key"),
                            affine<Scalar>(p + "attention.self.value"), affine<Scalar>(p + "attention.output.dense"),
                            norm<Scalar>(p + "attention.output.LayerNorm", eps),
                            affine<Scalar>(p + "intermediate.dense"), affine<Scalar>(p + "output.dense"),
                            norm<Scalar>(p + "output.LayerNorm", eps)});
    }
  }
  if (enc.heads <= 0 || enc.word_embeddings.cols() % enc.heads != 0)
    throw backend_unavailable("hidden size not divisible by the head count");
  return enc;
}

template <typename Scalar>
mlm_head<Scalar> checkpoint::masked_lm_head() const {
  const double eps = layer_norm_eps();
  mlm_head<Scalar> head;
  std::string decoder_weight;
  std::string decoder_bias;
  if (model_type_ == "distilbert") {
    head.transform = affine<Scalar>("vocab_transform");
    head.transform_activation = parse_activation(config_.value("activation", "gelu"));
    head.norm = norm<Scalar>("vocab_layer_norm", eps);
    decoder_weight = "vocab_projector.weight";
    decoder_bias = "vocab_projector.bias";
  } else if (model_type_ == "roberta") {
    head.transform = affine<Scalar>("lm_head.dense");
    head.norm = norm<Scalar>("lm_head.layer_norm", eps);
    decoder_weight = "lm_head.decoder.weight";
    decoder_bias = has("lm_head.bias") ? "lm_head.bias" : "lm_head.decoder.bias";
  } else {
    head.transform = affine<Scalar>("cls.predictions.transform.dense");
    head.transform_activation = parse_activation(config_.value("hidden_act", "gelu"));
    head.norm = norm<Scalar>("cls.predictions.transform.LayerNorm", eps);
    decoder_weight = "cls.predictions.decoder.weight";
    decoder_bias = "cls.predictions.bias";
  }
  head.decoder.weight = has(decoder_weight) ? dense<Scalar>(decoder_weight)
                                            : dense<Scalar>("embeddings.word_embeddings.weight");
  if (has(decoder_bias)) head.decoder.bias = column<Scalar>(decoder_bias);
  return head;
}

template <typename Scalar>
sequence_classifier_head<Scalar> checkpoint::classifier_head() const {
  sequence_classifier_head<Scalar> head;
  if (model_type_ == "roberta") {
    head.pool = affine<Scalar>("classifier.dense");
    head.out = affine<Scalar>("classifier.out_proj");
  } else if (model_type_ == "distilbert") {
    head.pool = affine<Scalar>("pre_classifier");
    head.pool_activation = activation::relu;
    head.out = affine<Scalar>("classifier");
  } else {
    head.pool = affine<Scalar>("pooler.dense");
    head.out = affine<Scalar>("classifier");
  }
  return head;
}

template <typename Scalar>
span_head<Scalar> checkpoint::question_answering_head() const {
  return {affine<Scalar>("qa_outputs")};
}

} // namespace prent::nn
