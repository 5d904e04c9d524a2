#include "prent/nn/tokenizer.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <nlohmann/json.hpp>

#include <climits>
#include <fstream>

namespace prent::nn {

namespace {

using text::code_point;

bool is_whitespace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' ||
         c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_control(char32_t c) {
  if (c == '\t' || c == '\n' || c == '\r') return false;
  return c < 0x20 || (c >= 0x7F && c < 0xA0) || c == 0xAD || (c >= 0x200B && c <= 0x200F) ||
         (c >= 0x202A && c <= 0x202E) || (c >= 0x2060 && c <= 0x2064) || c == 0xFEFF;
}

bool is_combining_mark(char32_t c) {
  return (c >= 0x0300 && c <= 0x036F) || (c >= 0x1AB0 && c <= 0x1AFF) ||
         (c >= 0x1DC0 && c <= 0x1DFF) || (c >= 0x20D0 && c <= 0x20FF) ||
         (c >= 0xFE20 && c <= 0xFE2F);
}

bool is_punctuation(char32_t c) {
  if (c < 0x80) return text::is_ascii_punct(static_cast<char>(c));
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB ||
         c == 0xBF || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0x3014 && c <= 0x301F) || (c >= 0xFF01 && c <= 0xFF0F);
}

bool is_cjk(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0x20000 && c <= 0x2A6DF) || (c >= 0x2A700 && c <= 0x2B73F) ||
         (c >= 0x2B740 && c <= 0x2B81F) || (c >= 0x2B820 && c <= 0x2CEAF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x2F800 && c <= 0x2FA1F);
}

// Canonical decomposition base letters for U+00C0..U+017F; '-' = no decomposition.
constexpr std::string_view latin1_bases =
    "AAAAAA-CEEEEIIII-NOOOOO--UUUUY--"
    "aaaaaa-ceeeeiiii-nooooo--uuuuy-y";
constexpr std::string_view latin_ext_a_bases =
    "AaAaAaCcCcCcCcDd--EeEeEeEeEeGgGgGgGgHh--IiIiIiIiI---JjKk-LlLlLl----NnNnNn---OoOo"
    "Oo--RrRrRrSsSsSsSsTtTt--UuUuUuUuUuUuWwYyYZzZzZz-";

static_assert(latin1_bases.size() == 64);
static_assert(latin_ext_a_bases.size() == 128);

char32_t strip_accent(char32_t c) {
  if (c >= 0xC0 && c <= 0xFF) {
    const char b = latin1_bases[c - 0xC0];
    return b == '-' ? c : static_cast<char32_t>(b);
  }
  if (c >= 0x100 && c <= 0x17F) {
    const char b = latin_ext_a_bases[c - 0x100];
    return b == '-' ? c : static_cast<char32_t>(b);
  }
  return c;
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0x80) return c;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
  if (c >= 0x100 && c <= 0x137 && c != 0x130 && c % 2 == 0) return c + 1;
  if (c >= 0x139 && c <= 0x148 && c % 2 == 1) return c + 1;
  if (c >= 0x14A && c <= 0x177 && c % 2 == 0) return c + 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E && c % 2 == 1) return c + 1;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

std::string encode_cps(const std::vector<code_point>& cps, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) text::append_utf8(out, cps[i].value);
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw backend_unavailable("cannot open " + p.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::int32_t lookup(const std::unordered_map<std::string, std::int32_t>& index,
                    const std::string& token, bool required) {
  auto it = index.find(token);
  if (it == index.end()) {
    if (required) throw backend_unavailable("tokenizer vocabulary lacks " + token);
    return -1;
  }
  return it->second;
}

void push(encoding& enc, std::int32_t id, std::int32_t segment, std::int32_t source,
          std::size_t b, std::size_t e) {
  enc.ids.push_back(id);
  enc.segment.push_back(segment);
  enc.source.push_back(source);
  enc.offsets.emplace_back(b, e);
}

void push_pieces(encoding& enc, const std::vector<piece>& ps, std::int32_t segment,
                 std::int32_t source) {
  for (const auto& p : ps) push(enc, p.id, segment, source, p.begin, p.end);
}

} // namespace

//
// WordPiece

wordpiece_tokenizer::wordpiece_tokenizer(const std::filesystem::path& vocab_txt, bool lower_case)
    : lower_case_(lower_case) {
  vocab_ = read_lines(vocab_txt);
  for (std::size_t i = 0; i < vocab_.size(); ++i)
    index_.emplace(vocab_[i], static_cast<std::int32_t>(i));
  specials_.cls = lookup(index_, "[CLS]", true);
  specials_.sep = lookup(index_, "[SEP]", true);
  specials_.pad = lookup(index_, "[PAD]", false);
  specials_.unk = lookup(index_, "[UNK]", true);
  specials_.mask = lookup(index_, "[MASK]", true);
}

std::vector<piece> wordpiece_tokenizer::tokenize(std::string_view input) const {
  // normalized code points, each remembering its source byte range
  std::vector<code_point> norm;
  std::vector<std::vector<code_point>> words;
  auto flush = [&] {
    if (!norm.empty()) words.push_back(std::move(norm));
    norm.clear();
  };
  for (const auto& cp : text::decode_utf8(input)) {
    char32_t c = cp.value;
    if (c == 0 || c == 0xFFFD || is_control(c)) continue;
    if (is_whitespace(c)) {
      flush();
      continue;
    }
    if (lower_case_) {
      c = to_lower(strip_accent(c));
      if (is_combining_mark(c)) continue;
    }
    if (is_punctuation(c) || is_cjk(c)) {
      flush();
      words.push_back({{c, cp.begin, cp.end}});
      continue;
    }
    norm.push_back({c, cp.begin, cp.end});
  }
  flush();

  std::vector<piece> out;
  for (const auto& w : words) {
    if (w.size() > 100) {
      out.push_back({specials_.unk, w.front().begin, w.back().end});
      continue;
    }
    std::vector<piece> sub;
    std::size_t start = 0;
    bool bad = false;
    while (start < w.size()) {
      std::size_t end = w.size();
      std::int32_t found = -1;
      while (start < end) {
        std::string s = encode_cps(w, start, end);
        if (start > 0) s = "##" + s;
        if (auto it = index_.find(s); it != index_.end()) {
          found = it->second;
          break;
        }
        --end;
      }
      if (found < 0) {
        bad = true;
        break;
      }
      sub.push_back({found, w[start].begin, w[end - 1].end});
      start = end;
    }
    if (bad)
      out.push_back({specials_.unk, w.front().begin, w.back().end});
    else
      out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string wordpiece_tokenizer::decode_token(std::int32_t id) const {
  return text::trim(vocab_.at(static_cast<std::size_t>(id)));
}

encoding wordpiece_tokenizer::build_single(const std::vector<piece>& a) const {
  encoding enc;
  push(enc, specials_.cls, 0, -1, 0, 0);
  push_pieces(enc, a, 0, 0);
  push(enc, specials_.sep, 0, -1, 0, 0);
  return enc;
}

encoding wordpiece_tokenizer::build_pair(const std::vector<piece>& a,
                                         const std::vector<piece>& b) const {
  encoding enc;
  push(enc, specials_.cls, 0, -1, 0, 0);
  push_pieces(enc, a, 0, 0);
  push(enc, specials_.sep, 0, -1, 0, 0);
  push_pieces(enc, b, 1, 1);
  push(enc, specials_.sep, 1, -1, 0, 0);
  return enc;
}

//
// byte-level BPE

namespace {

bool bpe_is_number(char32_t c) {
  return (c >= '0' && c <= '9') || c == 0xB2 || c == 0xB3 || c == 0xB9 ||
         (c >= 0xBC && c <= 0xBE) || (c >= 0x660 && c <= 0x669) || (c >= 0x2070 && c <= 0x2079) ||
         (c >= 0x2080 && c <= 0x2089) || (c >= 0xFF10 && c <= 0xFF19);
}

bool bpe_is_letter(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  if (is_whitespace(c) || bpe_is_number(c) || is_combining_mark(c)) return false;
  if (c >= 0xA1 && c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE00 && c <= 0xFE0F) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0x1F000 && c <= 0x1FAFF) return false;
  if (c == 0xFFFD) return false;
  return true;
}

} // namespace

std::vector<std::pair<std::size_t, std::size_t>>
byte_bpe_tokenizer::pre_tokenize(std::string_view s) {
  const auto cps = text::decode_utf8(s);
  const std::size_t n = cps.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  auto emit = [&](std::size_t i, std::size_t k) { out.emplace_back(cps[i].begin, cps[k - 1].end); };
  auto cp = [&](std::size_t i) { return cps[i].value; };
  auto is_other = [&](char32_t c) {
    return !is_whitespace(c) && !bpe_is_letter(c) && !bpe_is_number(c);
  };

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cp(i);
    if (c == '\'' && i + 1 < n) {
      const char32_t c1 = cp(i + 1);
      const char32_t c2 = i + 2 < n ? cp(i + 2) : 0;
      std::size_t len = 0;
      if (c1 == 's' || c1 == 't' || c1 == 'm' || c1 == 'd')
        len = 2;
      if ((c1 == 'r' && c2 == 'e') || (c1 == 'v' && c2 == 'e') || (c1 == 'l' && c2 == 'l'))
        len = 3;
      if (len) {
        emit(i, i + len);
        i += len;
        continue;
      }
    }
    std::size_t j = (c == ' ' && i + 1 < n) ? i + 1 : i;
    const char32_t d = cp(j);
    if (bpe_is_letter(d) || bpe_is_number(d) || is_other(d)) {
      std::size_t k = j;
      if (bpe_is_letter(d)) {
        while (k < n && bpe_is_letter(cp(k))) ++k;
      } else if (bpe_is_number(d)) {
        while (k < n && bpe_is_number(cp(k))) ++k;
      } else {
        while (k < n && is_other(cp(k))) ++k;
      }
      emit(i, k);
      i = k;
      continue;
    }
    // whitespace: \s+(?!\S) then \s+
    std::size_t k = i;
    while (k < n && is_whitespace(cp(k))) ++k;
    if (k < n && k - i > 1) --k;
    emit(i, k);
    i = k;
  }
  return out;
}

byte_bpe_tokenizer::byte_bpe_tokenizer(const std::filesystem::path& vocab_json,
                                       const std::filesystem::path& merges_txt) {
  // GPT-2 reversible byte -> printable code point table
  std::vector<int> bs;
  for (int b = '!'; b <= '~'; ++b) bs.push_back(b);
  for (int b = 0xA1; b <= 0xAC; ++b) bs.push_back(b);
  for (int b = 0xAE; b <= 0xFF; ++b) bs.push_back(b);
  std::vector<bool> direct(256, false);
  for (int b : bs) direct[static_cast<std::size_t>(b)] = true;
  int extra = 0;
  for (int b = 0; b < 256; ++b) {
    char32_t sym = direct[static_cast<std::size_t>(b)] ? static_cast<char32_t>(b)
                                                       : static_cast<char32_t>(256 + extra++);
    std::string u;
    text::append_utf8(u, sym);
    byte_to_symbol_[b] = u;
    symbol_to_byte_[u] = static_cast<unsigned char>(b);
  }

  std::ifstream in(vocab_json);
  if (!in) throw backend_unavailable("cannot open " + vocab_json.string());
  nlohmann::json vocab;
  in >> vocab;
  std::size_t max_id = 0;
  for (const auto& [tok, id] : vocab.items()) max_id = std::max(max_id, id.get<std::size_t>());
  vocab_.resize(max_id + 1);
  for (const auto& [tok, id] : vocab.items()) {
    vocab_[id.get<std::size_t>()] = tok;
    index_[tok] = id.get<std::int32_t>();
  }
  int rank = 0;
  for (const auto& line : read_lines(merges_txt)) {
    if (line.empty() || text::starts_with(line, "#version")) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) continue;
    ranks_.emplace(std::make_pair(line.substr(0, sp), line.substr(sp + 1)), rank++);
  }
  specials_.cls = lookup(index_, "<s>", true);
  specials_.sep = lookup(index_, "</s>", true);
  specials_.pad = lookup(index_, "<pad>", false);
  specials_.unk = lookup(index_, "<unk>", false);
  specials_.mask = lookup(index_, "<mask>", true);
}

std::vector<std::string> byte_bpe_tokenizer::bpe(const std::string& word) const {
  // word is a sequence of mapped symbols; split into code points first
  std::vector<std::string> syms;
  for (const auto& cp : text::decode_utf8(word)) syms.push_back(word.substr(cp.begin, cp.end - cp.begin));
  while (syms.size() > 1) {
    int best = INT_MAX;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto it = ranks_.find({syms[i], syms[i + 1]});
      if (it != ranks_.end() && it->second < best) {
        best = it->second;
        at = i;
      }
    }
    if (best == INT_MAX) break;
    const std::string a = syms[at];
    const std::string b = syms[at + 1];
    std::vector<std::string> merged;
    merged.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
        merged.push_back(a + b);
        i += 2;
      } else {
        merged.push_back(syms[i]);
        ++i;
      }
    }
    syms = std::move(merged);
  }
  return syms;
}

std::vector<piece> byte_bpe_tokenizer::tokenize(std::string_view input) const {
  std::vector<piece> out;
  for (const auto& [b, e] : pre_tokenize(input)) {
    std::string mapped;
    for (std::size_t i = b; i < e; ++i) mapped += byte_to_symbol_[static_cast<unsigned char>(input[i])];
    std::size_t pos = b;
    for (const auto& sym : bpe(mapped)) {
      const auto nbytes = text::decode_utf8(sym).size();
      std::size_t tb = pos;
      std::size_t te = pos + nbytes;
      pos = te;
      // trim spaces (not other whitespace) from the reported offsets
      while (tb < te && input[tb] == ' ') ++tb;
      while (te > tb && input[te - 1] == ' ') --te;
      if (tb == te) tb = te = pos;
      auto it = index_.find(sym);
      std::int32_t id = it != index_.end() ? it->second : specials_.unk;
      if (id < 0) throw backend_unavailable("byte-level BPE produced an unknown symbol " + sym);
      out.push_back({id, tb, te});
    }
  }
  return out;
}

std::string byte_bpe_tokenizer::decode_token(std::int32_t id) const {
  const auto& sym = vocab_.at(static_cast<std::size_t>(id));
  std::string bytes;
  for (const auto& cp : text::decode_utf8(sym)) {
    auto it = symbol_to_byte_.find(sym.substr(cp.begin, cp.end - cp.begin));
    if (it == symbol_to_byte_.end()) return text::trim(sym); // special tokens such as <s>
    bytes.push_back(static_cast<char>(it->second));
  }
  return text::trim(bytes);
}

encoding byte_bpe_tokenizer::build_single(const std::vector<piece>& a) const {
  encoding enc;
  push(enc, specials_.cls, 0, -1, 0, 0);
  push_pieces(enc, a, 0, 0);
  push(enc, specials_.sep, 0, -1, 0, 0);
  return enc;
}

encoding byte_bpe_tokenizer::build_pair(const std::vector<piece>& a,
                                        const std::vector<piece>& b) const {
  encoding enc;
  push(enc, specials_.cls, 0, -1, 0, 0);
  push_pieces(enc, a, 0, 0);
  push(enc, specials_.sep, 0, -1, 0, 0);
  push(enc, specials_.sep, 0, -1, 0, 0);
  push_pieces(enc, b, 0, 1);
  push(enc, specials_.sep, 0, -1, 0, 0);
  return enc;
}

std::unique_ptr<tokenizer> load_tokenizer(const std::filesystem::path& dir,
                                          const std::string& model_type) {
  if (model_type == "roberta") {
    return std::make_unique<byte_bpe_tokenizer>(dir / "vocab.json", dir / "merges.txt");
  }
  if (model_type == "bert" || model_type == "distilbert") {
    bool lower = true;
    if (std::ifstream cfg(dir / "tokenizer_config.json"); cfg) {
      auto j = nlohmann::json::parse(cfg, nullptr, false);
      if (j.is_object() && j.contains("do_lower_case") && j["do_lower_case"].is_boolean())
        lower = j["do_lower_case"].get<bool>();
    }
    return std::make_unique<wordpiece_tokenizer>(dir / "vocab.txt", lower);
  }
  throw backend_unavailable("no tokenizer for model type " + model_type);
}

} // namespace prent::nn
