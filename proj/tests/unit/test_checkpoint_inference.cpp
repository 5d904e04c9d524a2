// Native inference against outputs recorded from the reference implementation
// on small randomly initialised checkpoints (see scripts/make_reference_checkpoints.py).
#include <doctest.h>

#include "prent/checkpoint_backends.hpp"
#include "prent/error.hpp"
#include "prent/nn/encoder.hpp"
#include "prent/nn/tokenizer.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

namespace {

const std::filesystem::path root = std::filesystem::path(PRENT_FIXTURE_DIR) / "checkpoints";

const nlohmann::json& expected() {
  static const nlohmann::json j = [] {
    std::ifstream in(root / "expected.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

std::vector<std::int32_t> ids_of(const nlohmann::json& j) { return j.get<std::vector<std::int32_t>>(); }

prent::nn::encoding with_mask(const prent::nn::tokenizer& tok, const std::string& text) {
  const auto at = text.find("[Z]");
  auto pieces = tok.tokenize(text.substr(0, at));
  pieces.push_back({tok.specials().mask, 0, 0});
  for (const auto& p : tok.tokenize(text.substr(at + 3))) pieces.push_back(p);
  return tok.build_single(pieces);
}

bool ascii(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

} // namespace

TEST_CASE("wordpiece ids match the reference tokenizer") {
  prent::nn::wordpiece_tokenizer tok(root / "tiny-distilbert-mlm" / "vocab.txt", true);
  for (const auto& probe : expected()["wordpiece"]) {
    const auto text = probe["text"].get<std::string>();
    CAPTURE(text);
    CHECK(tok.build_single(tok.tokenize(text)).ids == ids_of(probe["ids"]));
  }
}

TEST_CASE("wordpiece offsets cover the source bytes") {
  prent::nn::wordpiece_tokenizer tok(root / "tiny-distilbert-mlm" / "vocab.txt", true);
  const std::string text = "Battle near Gao. People fled";
  for (const auto& p : tok.tokenize(text)) {
    REQUIRE(p.end > p.begin);
    REQUIRE(p.end <= text.size());
  }
}

TEST_CASE("byte-level BPE ids and offsets match the reference tokenizer") {
  const auto dir = root / "tiny-roberta-mnli";
  prent::nn::byte_bpe_tokenizer tok(dir / "vocab.json", dir / "merges.txt");
  for (const auto& probe : expected()["bpe"]) {
    const auto text = probe["text"].get<std::string>();
    CAPTURE(text);
    const auto enc = tok.build_single(tok.tokenize(text));
    CHECK(enc.ids == ids_of(probe["ids"]));
    if (!ascii(text)) continue; // reference offsets count characters, ours count bytes
    const auto want = probe["offsets"].get<std::vector<std::vector<std::size_t>>>();
    REQUIRE(want.size() == enc.size());
    for (std::size_t i = 1; i + 1 < want.size(); ++i) {
      CHECK(enc.offsets[i].first == want[i][0]);
      CHECK(enc.offsets[i].second == want[i][1]);
    }
  }
}

TEST_CASE("byte-level BPE offsets are byte offsets for non-ASCII text") {
  const auto dir = root / "tiny-roberta-mnli";
  prent::nn::byte_bpe_tokenizer tok(dir / "vocab.json", dir / "merges.txt");
  const std::string text = "A café owner";
  const auto pieces = tok.tokenize(text);
  REQUIRE(!pieces.empty());
  CHECK(pieces.back().end == text.size());
  std::size_t last = 0;
  for (const auto& p : pieces) {
    CHECK(p.begin >= last);
    CHECK(p.end <= text.size());
    last = p.end;
  }
}

TEST_CASE("GPT-2 pre-tokenization") {
  using prent::nn::byte_bpe_tokenizer;
  auto pieces = [](const std::string& s) {
    std::vector<std::string> out;
    for (auto [b, e] : byte_bpe_tokenizer::pre_tokenize(s)) out.push_back(s.substr(b, e - b));
    return out;
  };
  CHECK(pieces("it's 42 men!!") == std::vector<std::string>{"it", "'s", " 42", " men", "!!"});
  CHECK(pieces("a   b") == std::vector<std::string>{"a", "  ", " b"});
  CHECK(pieces("a\n\nb ") == std::vector<std::string>{"a", "\n", "\n", "b", " "});
}

TEST_CASE("mask fill logits and ranking match the reference model") {
  const auto dir = root / "tiny-distilbert-mlm";
  prent::nn::checkpoint ckpt(dir);
  const auto tok = prent::nn::load_tokenizer(dir, ckpt.model_type());
  const auto encoder = ckpt.encoder<float>();
  const auto head = ckpt.masked_lm_head<float>();
  const auto filler = prent::load_checkpoint_filler(dir);

  for (const auto& probe : expected()["fill_mask"]) {
    const auto text = probe["text"].get<std::string>();
    CAPTURE(text);
    const auto enc = with_mask(*tok, text);
    REQUIRE(enc.ids == ids_of(probe["ids"]));
    const auto pos = std::find(enc.ids.begin(), enc.ids.end(), tok->specials().mask) - enc.ids.begin();
    const auto logits = head.logits(encoder(enc.ids, enc.segment), pos);
    const auto want = probe["mask_logits"].get<std::vector<double>>();
    REQUIRE(static_cast<std::size_t>(logits.size()) == want.size());
    double worst = 0;
    for (std::size_t i = 0; i < want.size(); ++i)
      worst = std::max(worst, std::abs(static_cast<double>(logits[static_cast<Eigen::Index>(i)]) - want[i]));
    CHECK(worst < 1e-4);

    const auto top = filler->fill_mask(text, 10);
    const auto ref = probe["top"];
    REQUIRE(top.size() == ref.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
      CHECK(top[i].token == ref[i][0].get<std::string>());
      CHECK(top[i].probability == doctest::Approx(ref[i][1].get<double>()).epsilon(1e-4));
    }
    // prefix property across k
    const auto top3 = filler->fill_mask(text, 3);
    CHECK(std::equal(top3.begin(), top3.end(), top.begin()));
  }
}

TEST_CASE("long descriptions are truncated from the left") {
  const auto dir = root / "tiny-distilbert-mlm";
  prent::nn::checkpoint ckpt(dir);
  const auto& probe = expected()["fill_mask_truncated"];
  const auto ids = ids_of(probe["ids"]);
  const auto head = ckpt.masked_lm_head<float>();
  const auto encoder = ckpt.encoder<float>();
  const auto pos = std::find(ids.begin(), ids.end(), 103) - ids.begin();
  REQUIRE(ids.size() == encoder.max_tokens());
  const auto logits = head.logits(encoder(ids), pos);

  const auto filler = prent::load_checkpoint_filler(dir);
  const auto top = filler->fill_mask(probe["text"].get<std::string>(), 1);
  Eigen::Index best = 0;
  logits.maxCoeff(&best);
  prent::nn::wordpiece_tokenizer tok(dir / "vocab.txt", true);
  CHECK(top.at(0).token == tok.decode_token(static_cast<std::int32_t>(best)));
  const auto want = probe["mask_logits"].get<std::vector<double>>();
  CHECK(static_cast<double>(logits[0]) == doctest::Approx(want[0]).epsilon(1e-4));

  std::string huge;
  for (int i = 0; i < 40; ++i) huge += "people were ";
  CHECK_NOTHROW(filler->fill_mask("Riots. " + huge + "[Z].", 5));
  CHECK_THROWS_AS(filler->fill_mask("Riots. [Z] " + huge + ".", 5), prent::input_too_long);
}

TEST_CASE("roberta mask token absorbs the preceding space") {
  const auto dir = root / "tiny-roberta-mnli";
  prent::nn::byte_bpe_tokenizer tok(dir / "vocab.json", dir / "merges.txt");
  for (const auto& probe : expected()["bpe_mask"]) {
    const auto text = probe["text"].get<std::string>();
    const auto at = text.find("[Z]");
    std::string left = text.substr(0, at);
    while (!left.empty() && left.back() == ' ') left.pop_back();
    auto pieces = tok.tokenize(left);
    pieces.push_back({tok.specials().mask, 0, 0});
    for (const auto& p : tok.tokenize(text.substr(at + 3))) pieces.push_back(p);
    CHECK(tok.build_single(pieces).ids == ids_of(probe["ids"]));
  }
}

TEST_CASE("entailment probabilities match the reference classifier") {
  const auto dir = root / "tiny-roberta-mnli";
  const auto nli = prent::load_checkpoint_nli(dir);
  for (const auto& probe : expected()["entailment"]) {
    const auto premise = probe["premise"].get<std::string>();
    const auto hypothesis = probe["hypothesis"].get<std::string>();
    CAPTURE(premise);
    const double p = nli->entailment_probability(premise, hypothesis).entail_probability;
    CHECK(p == doctest::Approx(probe["entail"].get<double>()).epsilon(1e-5));
    CHECK(p == nli->entailment_probability(premise, hypothesis).entail_probability);
  }
}

TEST_CASE("extractive QA decoding matches the reference spans") {
  const auto dir = root / "tiny-roberta-squad2";
  const auto qa = prent::load_checkpoint_qa(dir);
  for (const auto& probe : expected()["qa"]) {
    const auto question = probe["question"].get<std::string>();
    const auto context = probe["context"].get<std::string>();
    CAPTURE(question);
    const auto& ans = probe["answer"];
    const double conf = ans["confidence"].get<double>();
    if (probe["null_score"].get<double>() > conf) {
      CHECK_THROWS_AS(qa->extractive_answer(question, context), prent::no_answer);
      continue;
    }
    const auto got = qa->extractive_answer(question, context);
    CHECK(got.text == ans["text"].get<std::string>());
    CHECK(got.start == ans["start"].get<std::size_t>());
    CHECK(got.end == ans["end"].get<std::size_t>());
    CHECK(got.confidence == doctest::Approx(conf).epsilon(1e-4));
    CHECK(context.substr(got.start, got.end - got.start) == got.text);
    CHECK_THROWS_AS(qa->extractive_answer(question, context, conf + 1e-3), prent::no_answer);
  }
}

TEST_CASE("unsupported checkpoints are reported as unavailable") {
  CHECK_THROWS_AS(prent::load_checkpoint_filler(root / "does-not-exist"), prent::backend_unavailable);
}
