#include "prent/robustness.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace prent {

namespace {

const char* stopword_data =
#include "stopwords_en.inc"
    ;

} // namespace

fixed_vocab build_fixed_vocab(const mask_filler& fill, std::span<const event_description> corpus,
                              const prompt_template& t, std::size_t size, const pipeline_config& config) {
  if (corpus.empty()) throw insufficient_data("cannot build a vocabulary from an empty corpus");
  auto cfg = config;
  cfg.constrained_vocab.reset();
  std::map<std::string, std::size_t> counts;
  for (const auto& e : corpus)
    for (const auto& c : prompt_candidates(fill, e, t, cfg).candidates) ++counts[c.token];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  fixed_vocab v{t.id, {}};
  for (std::size_t i = 0; i < ranked.size() && i < size; ++i) v.tokens.push_back(ranked[i].first);
  return v;
}

namespace {

token_distribution normalized(Eigen::VectorXd mass) {
  const double total = mass.sum();
  if (!(total > 0)) return {Eigen::VectorXd::Zero(mass.size()), true};
  return {mass / total, false};
}

} // namespace

distribution_pair token_distributions(const backends& models, const event_description& event,
                                      const prompt_template& t, const fixed_vocab& vocab,
                                      const pipeline_config& config) {
  if (vocab.tokens.empty()) throw std::invalid_argument("fixed vocabulary is empty");
  auto cfg = config;
  cfg.constrained_vocab = vocab.token_set();
  const auto candidates = prompt_candidates(models.fill_model(), event, t, cfg);
  const auto scored = score_candidates(models.nli_model(), event, t, candidates);
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < vocab.tokens.size(); ++i) index[vocab.tokens[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(vocab.tokens.size());
  Eigen::VectorXd pr = Eigen::VectorXd::Zero(n), prent = Eigen::VectorXd::Zero(n);
  for (const auto& c : scored.scored) {
    const auto i = index.at(c.token);
    pr[i] = c.fill_probability;
    if (c.entail_probability >= config.entail_threshold) prent[i] = c.fill_probability;
  }
  return {normalized(pr), normalized(prent)};
}

token_distribution token_distribution_for(const backends& models, const event_description& event,
                                          const prompt_template& t, const fixed_vocab& vocab,
                                          distribution_mode mode, const pipeline_config& config) {
  auto both = token_distributions(models, event, t, vocab, config);
  return mode == distribution_mode::pr ? both.pr : both.prent;
}

double js_distance(const token_distribution& p, const token_distribution& q) {
  if (p.probabilities.size() != q.probabilities.size())
    throw vocab_mismatch("distributions are over different vocabularies");
  if (p.empty || q.empty) throw empty_distribution("distribution has no mass");
  return js_distance(p.probabilities, q.probabilities);
}

//
// perturbations

std::string to_string(perturbation_kind k) {
  switch (k) {
  case perturbation_kind::identity: return "identity";
  case perturbation_kind::paraphrase: return "paraphrase";
  case perturbation_kind::stopword_removal: return "stopword_removal";
  case perturbation_kind::entity_removal: return "entity_removal";
  case perturbation_kind::duplication: return "duplication";
  }
  return "?";
}

perturbation_kind parse_perturbation_kind(std::string_view s) {
  for (auto k : {perturbation_kind::identity, perturbation_kind::paraphrase, perturbation_kind::stopword_removal,
                 perturbation_kind::entity_removal, perturbation_kind::duplication})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown perturbation '" + std::string(s) + "'");
}

std::vector<std::string> default_paraphrases() {
  return {"This event involves [Z].", "This event concerns [Z].", "This event is about [Z]."};
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    for (const auto& w : text::split_whitespace(stopword_data)) out.insert(w);
    return out;
  }();
  return words;
}

void perturbation_spec::validate() const {
  if (intensity < 1 || intensity > 2) throw std::invalid_argument("intensity must be 1 or 2");
  if (intensity == 2 && kind != perturbation_kind::paraphrase && kind != perturbation_kind::duplication)
    throw std::invalid_argument("intensity 2 applies to paraphrase and duplication only");
  if (kind == perturbation_kind::paraphrase) {
    if (paraphrases.size() <= static_cast<std::size_t>(intensity))
      throw std::invalid_argument("paraphrase list too short for intensity " + std::to_string(intensity));
    for (const auto& p : paraphrases) validate_template({"paraphrase", p});
  }
  if (kind == perturbation_kind::duplication && text::trim(duplicate_word).empty())
    throw std::invalid_argument("duplication needs a template word");
}

std::string perturbation_spec::label() const {
  if (kind == perturbation_kind::identity) return "identity";
  return to_string(kind) + " x" + std::to_string(intensity);
}

perturbation_spec perturbation_spec::from_json(const nlohmann::json& j) {
  perturbation_spec s;
  s.kind = parse_perturbation_kind(j.at("kind").get<std::string>());
  s.intensity = j.value("intensity", 1);
  if (j.contains("paraphrases")) s.paraphrases = j["paraphrases"].get<std::vector<std::string>>();
  if (j.contains("stopwords")) s.stopwords = j["stopwords"].get<std::set<std::string>>();
  if (j.contains("placeholders")) s.placeholders = j["placeholders"].get<std::map<std::string, std::string>>();
  if (j.contains("duplicate_word")) s.duplicate_word = j["duplicate_word"].get<std::string>();
  s.validate();
  return s;
}

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

/// word with surrounding punctuation split off: [lead, core, trail]
std::array<std::string, 3> split_punct(const std::string& w) {
  std::size_t b = 0, e = w.size();
  while (b < e && text::is_ascii_punct(w[b]) && w[b] != '[') ++b;
  while (e > b && text::is_ascii_punct(w[e - 1]) && w[e - 1] != ']') --e;
  return {w.substr(0, b), w.substr(b, e - b), w.substr(e)};
}

} // namespace

std::vector<entity_span> capitalized_span_recognizer::find(std::string_view s) const {
  struct word {
    std::size_t begin, end; // core range
    std::string core;
    bool sentence_start;
    bool ends_sentence;
  };
  std::vector<word> words;
  bool next_starts = true;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (b == i) break;
    const std::string w(s.substr(b, i - b));
    const auto [lead, core, trail] = split_punct(w);
    words.push_back({b + lead.size(), b + lead.size() + core.size(), core, next_starts,
                     trail.find_first_of(".!?") != std::string::npos});
    next_starts = words.back().ends_sentence;
  }
  static const std::set<std::string> locative{"in", "near", "at", "from", "of", "to", "outside", "around"};
  static const std::map<std::string, std::string> anonymized{
      {"[ORG]", "ORG"}, {"[LOC]", "LOC"}, {"[NAME]", "PER"}, {"[PER]", "PER"}, {"[PERSON]", "PER"}};
  std::vector<entity_span> out;
  for (std::size_t k = 0; k < words.size();) {
    if (auto it = anonymized.find(words[k].core); it != anonymized.end()) {
      out.push_back({words[k].begin, words[k].end, it->second});
      ++k;
      continue;
    }
    auto capital = [&](std::size_t j) { return !words[j].core.empty() && is_upper(words[j].core[0]); };
    if (!capital(k)) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j + 1 < words.size() && !words[j].ends_sentence && capital(j + 1) && !words[j + 1].sentence_start) ++j;
    const bool multi = j > k;
    if (!words[k].sentence_start || multi) {
      const bool loc = k > 0 && locative.count(text::to_lower_ascii(words[k - 1].core)) != 0;
      out.push_back({words[k].begin, words[j].end, loc ? "LOC" : "ORG"});
    }
    k = j + 1;
  }
  return out;
}

std::string remove_stopwords(std::string_view s, const std::set<std::string>& stopwords) {
  std::vector<std::string> kept;
  for (const auto& w : text::split_whitespace(s)) {
    const auto [lead, core, trail] = split_punct(w);
    if (!core.empty() && stopwords.count(text::to_lower_ascii(core))) {
      // keep sentence punctuation attached to the previous word
      if (!trail.empty() && !kept.empty()) kept.back() += trail;
      continue;
    }
    kept.push_back(w);
  }
  return text::join(kept, " ");
}

perturbed_input perturb(const event_description& event, const prompt_template& t, const perturbation_spec& spec,
                        const entity_recognizer* recognizer) {
  spec.validate();
  perturbed_input out{event.text(), t, {}};
  switch (spec.kind) {
  case perturbation_kind::identity: break;
  case perturbation_kind::paraphrase:
    out.templ.text = spec.paraphrases[static_cast<std::size_t>(spec.intensity)];
    break;
  case perturbation_kind::stopword_removal:
    out.event = remove_stopwords(event.text(), spec.stopwords);
    if (text::trim(out.event).empty()) {
      out.event = event.text();
      out.warnings.push_back("description consists of stop words only; left unchanged");
    }
    break;
  case perturbation_kind::entity_removal: {
    capitalized_span_recognizer fallback;
    const auto spans = (recognizer ? recognizer : &fallback)->find(event.text());
    if (spans.empty()) {
      out.warnings.push_back("no entities found");
      break;
    }
    std::string s;
    std::size_t pos = 0;
    for (const auto& sp : spans) {
      s += event.text().substr(pos, sp.begin - pos);
      auto it = spec.placeholders.find(sp.kind);
      s += it != spec.placeholders.end() ? it->second : "entities";
      pos = sp.end;
    }
    s += event.text().substr(pos);
    out.event = text::collapse_whitespace(s);
    break;
  }
  case perturbation_kind::duplication: {
    const auto words = text::split(t.text, ' ');
    std::vector<std::string> result;
    bool done = false;
    for (const auto& w : words) {
      result.push_back(w);
      if (!done && text::to_lower_ascii(w) == text::to_lower_ascii(spec.duplicate_word)) {
        for (int r = 0; r < spec.intensity; ++r) result.push_back(w);
        done = true;
      }
    }
    if (!done) out.warnings.push_back("template has no word '" + spec.duplicate_word + "' to duplicate");
    out.templ.text = text::join(result, " ");
    break;
  }
  }
  return out;
}

//
// report

double order_free_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

robustness_report run_robustness(const backends& models, std::span<const event_description> corpus,
                                 const prompt_template& t, const std::vector<perturbation_spec>& specs,
                                 const fixed_vocab& vocab, const pipeline_config& config,
                                 const entity_recognizer* recognizer) {
  for (const auto& s : specs) s.validate();
  robustness_report rep{vocab, corpus.size(), {}};
  std::vector<distribution_pair> base;
  base.reserve(corpus.size());
  for (const auto& e : corpus) base.push_back(token_distributions(models, e, t, vocab, config));

  for (const auto& spec : specs) {
    robustness_row row{spec.label(), spec, {}, {}, 0};
    std::vector<double> d_pr, d_prent;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto p = perturb(corpus[i], t, spec, recognizer);
      row.warnings += p.warnings.size();
      const auto moved = token_distributions(models, event_description(p.event), p.templ, vocab, config);
      auto add = [](const token_distribution& a, const token_distribution& b, std::vector<double>& into,
                    mode_summary& sum) {
        if (a.empty || b.empty)
          ++sum.skipped;
        else
          into.push_back(js_distance(a, b));
      };
      add(base[i].pr, moved.pr, d_pr, row.pr);
      add(base[i].prent, moved.prent, d_prent, row.prent);
    }
    row.pr.used = d_pr.size();
    row.prent.used = d_prent.size();
    row.pr.mean = order_free_mean(std::move(d_pr));
    row.prent.mean = order_free_mean(std::move(d_prent));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

nlohmann::json robustness_report::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  auto mode_j = [](const mode_summary& m) {
    return nlohmann::json{{"mean_js", m.mean}, {"n_used", m.used}, {"n_skipped", m.skipped}};
  };
  for (const auto& r : rows)
    rows_j.push_back({{"perturbation", to_string(r.spec.kind)},
                      {"intensity", r.spec.intensity},
                      {"label", r.label},
                      {"pr", mode_j(r.pr)},
                      {"prent", mode_j(r.prent)},
                      {"warnings", r.warnings}});
  return {{"template_id", vocab.template_id}, {"vocab", vocab.tokens}, {"events", events}, {"rows", rows_j}};
}

std::string robustness_report::to_table() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %10s %10s %8s %8s\n", "perturbation", "PR", "PR-ENT", "skip PR", "skip ENT");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-22s %10.4f %10.4f %8zu %8zu\n", r.label.c_str(), r.pr.mean, r.prent.mean,
                  r.pr.skipped, r.prent.skipped);
    out << buf;
  }
  return out.str();
}

} // namespace prent
