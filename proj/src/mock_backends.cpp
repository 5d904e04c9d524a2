#include "prent/mock_backends.hpp"

#include "prent/error.hpp"

#include <fstream>
#include <set>

namespace prent {

using nlohmann::json;

namespace {

std::vector<mask_fill_result> parse_fill_list(const std::string& key, const json& list) {
  if (!list.is_array()) throw parse_error("fill_mask entry for \"" + key + "\" is not an array");
  std::vector<mask_fill_result> out;
  std::set<std::string> seen;
  for (const auto& item : list) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number())
      throw parse_error("fill_mask entry for \"" + key + "\" must hold [token, probability] pairs");
    mask_fill_result r{item[0].get<std::string>(), item[1].get<double>()};
    if (r.token.empty() || r.probability < 0.0 || r.probability > 1.0)
      throw parse_error("invalid fill result in entry \"" + key + "\"");
    if (!out.empty() && r.probability > out.back().probability)
      throw parse_error("fill_mask entry for \"" + key + "\" is not sorted by probability");
    if (!seen.insert(r.token).second)
      throw parse_error("duplicate token \"" + r.token + "\" in entry \"" + key + "\"");
    out.push_back(std::move(r));
  }
  return out;
}

span_answer parse_answer(const std::string& context, const json& j) {
  span_answer a;
  a.text = j.at("text").get<std::string>();
  a.start = j.at("start").get<std::size_t>();
  a.end = j.at("end").get<std::size_t>();
  a.confidence = j.at("confidence").get<double>();
  if (a.start >= a.end || a.end > context.size() ||
      context.compare(a.start, a.end - a.start, a.text) != 0)
    throw parse_error("qa fixture span does not match its context: \"" + a.text + "\"");
  if (a.confidence < 0.0 || a.confidence > 1.0)
    throw parse_error("qa fixture confidence outside [0,1]");
  return a;
}

} // namespace

mock_fixtures mock_fixtures::from_json(const json& doc) {
  mock_fixtures f;
  if (auto it = doc.find("fill_mask"); it != doc.end()) {
    for (const auto& [text, list] : it->items()) f.fill_[text] = parse_fill_list(text, list);
  }
  if (auto it = doc.find("entailment"); it != doc.end()) {
    for (const auto& [premise, table] : it->items()) {
      for (const auto& [hypothesis, p] : table.items()) {
        const double v = p.get<double>();
        if (v < 0.0 || v > 1.0) throw parse_error("entailment probability outside [0,1]");
        f.entail_[premise][hypothesis] = v;
      }
    }
  }
  if (auto it = doc.find("qa"); it != doc.end()) {
    for (const auto& [question, table] : it->items()) {
      for (const auto& [context, answer] : table.items()) {
        if (answer.is_null())
          f.qa_[question][context] = std::nullopt;
        else
          f.qa_[question][context] = parse_answer(context, answer);
      }
    }
  }
  return f;
}

mock_fixtures mock_fixtures::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw backend_unavailable("cannot open mock fixture file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw parse_error("mock fixture file " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

mock_fixtures mock_fixtures::load(const std::vector<std::filesystem::path>& paths) {
  mock_fixtures all;
  for (const auto& p : paths) all.merge(load(p));
  return all;
}

void mock_fixtures::merge(const mock_fixtures& other) {
  for (const auto& [k, v] : other.fill_) fill_[k] = v;
  for (const auto& [p, table] : other.entail_)
    for (const auto& [h, v] : table) entail_[p][h] = v;
  for (const auto& [q, table] : other.qa_)
    for (const auto& [c, v] : table) qa_[q][c] = v;
}

void mock_fixtures::set_fill(std::string text, std::vector<mask_fill_result> results) {
  fill_[std::move(text)] = std::move(results);
}

void mock_fixtures::set_entailment(std::string premise, std::string hypothesis, double p) {
  entail_[std::move(premise)][std::move(hypothesis)] = p;
}

void mock_fixtures::set_answer(std::string question, std::string context,
                               std::optional<span_answer> answer) {
  qa_[std::move(question)][std::move(context)] = std::move(answer);
}

const std::vector<mask_fill_result>* mock_fixtures::find_fill(std::string_view text) const {
  auto it = fill_.find(text);
  return it == fill_.end() ? nullptr : &it->second;
}

std::optional<double> mock_fixtures::find_entailment(std::string_view premise,
                                                     std::string_view hypothesis) const {
  auto it = entail_.find(premise);
  if (it == entail_.end()) return std::nullopt;
  auto jt = it->second.find(hypothesis);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::optional<std::optional<span_answer>>
mock_fixtures::find_answer(std::string_view question, std::string_view context) const {
  auto it = qa_.find(question);
  if (it == qa_.end()) return std::nullopt;
  auto jt = it->second.find(context);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::size_t mock_fixtures::entailment_entries() const {
  std::size_t n = 0;
  for (const auto& [p, t] : entail_) n += t.size();
  return n;
}

std::size_t mock_fixtures::qa_entries() const {
  std::size_t n = 0;
  for (const auto& [q, t] : qa_) n += t.size();
  return n;
}

json mock_fixtures::to_json() const {
  json doc = json::object();
  json fill = json::object();
  for (const auto& [text, list] : fill_) {
    json arr = json::array();
    for (const auto& r : list) arr.push_back(json::array({r.token, r.probability}));
    fill[text] = std::move(arr);
  }
  json entail = json::object();
  for (const auto& [p, table] : entail_) {
    json t = json::object();
    for (const auto& [h, v] : table) t[h] = v;
    entail[p] = std::move(t);
  }
  json qa = json::object();
  for (const auto& [q, table] : qa_) {
    json t = json::object();
    for (const auto& [c, a] : table) {
      if (a)
        t[c] = {{"text", a->text}, {"start", a->start}, {"end", a->end},
                {"confidence", a->confidence}};
      else
        t[c] = nullptr;
    }
    qa[q] = std::move(t);
  }
  doc["fill_mask"] = std::move(fill);
  doc["entailment"] = std::move(entail);
  doc["qa"] = std::move(qa);
  return doc;
}

//
// backends

mock_mask_filler::mock_mask_filler(std::shared_ptr<const mock_fixtures> fixtures, std::string id)
    : fixtures_(std::move(fixtures)), id_(std::move(id)) {}

std::vector<mask_fill_result> mock_mask_filler::fill_mask(std::string_view text,
                                                          std::size_t k) const {
  require_single_mask(text);
  if (k == 0) throw std::invalid_argument("fill_mask: k must be positive");
  const auto* list = fixtures_->find_fill(text);
  if (!list) throw fixture_miss("no fill_mask fixture for \"" + std::string(text) + "\"");
  const auto n = std::min(k, list->size());
  return {list->begin(), list->begin() + static_cast<std::ptrdiff_t>(n)};
}

mock_entailment_model::mock_entailment_model(std::shared_ptr<const mock_fixtures> fixtures,
                                             std::string id)
    : fixtures_(std::move(fixtures)), id_(std::move(id)) {}

entailment_score mock_entailment_model::entailment_probability(std::string_view premise,
                                                               std::string_view hypothesis) const {
  auto p = fixtures_->find_entailment(premise, hypothesis);
  if (!p)
    throw fixture_miss("no entailment fixture for (\"" + std::string(premise) + "\", \"" +
                       std::string(hypothesis) + "\")");
  return {*p};
}

mock_question_answerer::mock_question_answerer(std::shared_ptr<const mock_fixtures> fixtures,
                                               std::string id)
    : fixtures_(std::move(fixtures)), id_(std::move(id)) {}

span_answer mock_question_answerer::extractive_answer(std::string_view question,
                                                      std::string_view context,
                                                      double min_confidence) const {
  auto found = fixtures_->find_answer(question, context);
  if (!found)
    throw fixture_miss("no qa fixture for (\"" + std::string(question) + "\", \"" +
                       std::string(context) + "\")");
  if (!*found) throw no_answer("model abstains on \"" + std::string(question) + "\"");
  const auto& a = **found;
  if (a.confidence < min_confidence)
    throw no_answer("best span for \"" + std::string(question) + "\" below confidence floor");
  return a;
}

backends make_mock_backends(std::shared_ptr<const mock_fixtures> fixtures) {
  return {std::make_shared<mock_mask_filler>(fixtures),
          std::make_shared<mock_entailment_model>(fixtures),
          std::make_shared<mock_question_answerer>(fixtures)};
}

} // namespace prent

namespace prent {

class fixture_recorder::fill final : public mask_filler {
public:
  explicit fill(std::shared_ptr<shared> s) : s_(std::move(s)) {}
  std::vector<mask_fill_result> fill_mask(std::string_view text, std::size_t k) const override {
    auto out = s_->inner.fill_model().fill_mask(text, k);
    std::lock_guard lock(s_->lock);
    const auto* known = s_->table.find_fill(text);
    if (!known || known->size() < out.size()) s_->table.set_fill(std::string(text), out);
    return out;
  }
  std::string model_id() const override { return s_->inner.fill_model().model_id(); }

private:
  std::shared_ptr<shared> s_;
};

class fixture_recorder::nli final : public entailment_model {
public:
  explicit nli(std::shared_ptr<shared> s) : s_(std::move(s)) {}
  entailment_score entailment_probability(std::string_view premise, std::string_view hypothesis) const override {
    auto out = s_->inner.nli_model().entailment_probability(premise, hypothesis);
    std::lock_guard lock(s_->lock);
    s_->table.set_entailment(std::string(premise), std::string(hypothesis), out.entail_probability);
    return out;
  }
  std::string model_id() const override { return s_->inner.nli_model().model_id(); }

private:
  std::shared_ptr<shared> s_;
};

class fixture_recorder::qa final : public question_answerer {
public:
  explicit qa(std::shared_ptr<shared> s) : s_(std::move(s)) {}
  span_answer extractive_answer(std::string_view question, std::string_view context,
                                double min_confidence) const override {
    // record the unfloored answer so replays honour any floor
    std::optional<span_answer> best;
    try {
      best = s_->inner.qa_model().extractive_answer(question, context, 0.0);
    } catch (const no_answer&) {
    }
    {
      std::lock_guard lock(s_->lock);
      s_->table.set_answer(std::string(question), std::string(context), best);
    }
    if (!best) throw no_answer("model abstains on \"" + std::string(question) + "\"");
    if (best->confidence < min_confidence)
      throw no_answer("best span for \"" + std::string(question) + "\" below confidence floor");
    return *best;
  }
  std::string model_id() const override { return s_->inner.qa_model().model_id(); }

private:
  std::shared_ptr<shared> s_;
};

fixture_recorder::fixture_recorder(backends inner) : state_(std::make_shared<shared>()) {
  state_->inner = std::move(inner);
}

backends fixture_recorder::recording() const {
  backends b;
  if (state_->inner.fill) b.fill = std::make_shared<fill>(state_);
  if (state_->inner.nli) b.nli = std::make_shared<nli>(state_);
  if (state_->inner.qa) b.qa = std::make_shared<qa>(state_);
  return b;
}

mock_fixtures fixture_recorder::snapshot() const {
  std::lock_guard lock(state_->lock);
  return state_->table;
}

} // namespace prent
