#include "world.hpp"

#include "prent/error.hpp"
#include "prent/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synth {

namespace {

struct verb {
  const char* phrase;
  std::vector<std::string> involves;
  std::vector<std::string> people;
};

struct profile {
  const char* name;
  double weight;
  double fatal_rate;
  std::vector<std::string> base_involves;
  std::vector<std::string> base_people;
  std::vector<std::string> plausible;
  std::vector<verb> verbs;
  std::vector<std::string> actors;
  std::vector<std::string> targets;
};

const std::vector<profile>& profiles() {
  static const std::vector<profile> p{
      {"Battles", 0.20, 0.55,
       {"fighting", "clashes", "battles", "gunfire", "combat"},
       {"wounded", "displaced"},
       {"violence", "attacks", "war", "terrorism", "killed", "injured", "shot", "weapons", "guns", "soldiers"},
       {{"clashed with", {"clashes", "fighting"}, {}},
        {"fought", {"fighting", "battles"}, {}},
        {"exchanged fire with", {"gunfire", "shooting"}, {"shot"}},
        {"engaged in heavy fighting with", {"fighting", "combat"}, {}},
        {"ambushed", {"ambush", "attacks"}, {"attacked"}},
        {"attacked positions of", {"attacks", "fighting"}, {"attacked"}},
        {"skirmished with", {"clashes"}, {}},
        {"repelled an assault by", {"fighting", "attacks"}, {}},
        {"battled", {"battles", "fighting"}, {}},
        {"overran a base of", {"attacks", "combat"}, {}},
        {"launched an offensive against", {"offensive", "fighting"}, {}},
        {"traded gunfire with", {"gunfire", "shooting"}, {"shot"}},
        {"besieged", {"siege", "fighting"}, {"trapped"}},
        {"counterattacked", {"fighting", "attacks"}, {}},
        {"routed", {"battles"}, {"displaced"}}},
       {"Soldiers", "Government forces", "The Armed Forces of Mali", "Rebel fighters", "JNIM militants", "Militiamen",
        "Dozo hunters", "The army"},
       {"militants", "rebel fighters", "an armed group", "soldiers", "a rival militia", "jihadist fighters",
        "members of the Islamic State"}},
      {"Explosions/Remote violence", 0.13, 0.5,
       {"shelling", "explosions", "bombing", "airstrikes"},
       {"wounded", "evacuated"},
       {"violence", "attacks", "terrorism", "war", "killed", "injured", "displaced", "weapons", "fireworks"},
       {{"shelled", {"shelling", "artillery"}, {}},
        {"bombed", {"bombing", "bombs"}, {}},
        {"launched airstrikes on", {"airstrikes", "bombing"}, {}},
        {"detonated an IED near", {"explosions", "bombs"}, {}},
        {"fired mortars at", {"shelling", "mortars"}, {}},
        {"struck with a drone", {"airstrikes", "drones"}, {}},
        {"hit with artillery", {"artillery", "shelling"}, {}},
        {"planted explosives at", {"explosions", "bombs"}, {}},
        {"launched rockets at", {"rockets", "shelling"}, {}},
        {"carried out a suicide bombing against", {"bombing", "suicide"}, {}}},
       {"The Air Force", "Militants", "Government forces", "Unknown assailants", "Insurgents", "Suspected jihadists"},
       {"a military camp", "a convoy", "a market", "rebel positions", "a checkpoint", "a mosque", "a bridge"}},
      {"Protests", 0.22, 0.03,
       {"protests", "demonstrations", "protest", "demonstration"},
       {"protesting", "gathered"},
       {"strikes", "elections", "politics", "arrested", "injured", "dispersed", "riots", "marching"},
       {{"protested against", {"protests", "protest"}, {"protesting"}},
        {"marched against", {"marches", "demonstrations"}, {"marching"}},
        {"rallied against", {"rallies", "protests"}, {"gathered"}},
        {"demonstrated against", {"demonstrations", "demonstration"}, {"demonstrating"}},
        {"held a sit-in over", {"protests"}, {"gathered"}},
        {"staged a strike over", {"strikes", "protest"}, {"striking"}},
        {"gathered to denounce", {"protests", "demonstrations"}, {"gathered"}},
        {"picketed offices over", {"protests"}, {"protesting"}},
        {"boycotted classes over", {"boycott", "protests"}, {"protesting"}},
        {"blocked roads to decry", {"roadblocks", "protests"}, {"protesting"}},
        {"petitioned officials over", {"petitions"}, {"gathered"}},
        {"chanted slogans against", {"demonstrations"}, {"chanting"}}},
       {"Protesters", "Students", "Traders", "Residents", "Teachers", "Women", "Health workers", "Opposition supporters"},
       {"fuel prices", "the government", "the arrest of a local leader", "insecurity", "electricity cuts",
        "the election results", "unpaid salaries"}},
      {"Riots", 0.12, 0.15,
       {"riots", "rioting", "vandalism"},
       {"dispersed"},
       {"violence", "protests", "clashes", "injured", "arrested", "fireworks", "fire"},
       {{"looted", {"looting", "theft"}, {"robbed"}},
        {"vandalised", {"vandalism"}, {}},
        {"set fire to", {"arson", "fire"}, {}},
        {"ransacked", {"looting", "vandalism"}, {}},
        {"pelted with stones", {"violence", "riots"}, {"injured"}},
        {"torched", {"arson", "fire"}, {}},
        {"robbed", {"robbery", "theft"}, {"robbed"}},
        {"stormed", {"riots"}, {}},
        {"destroyed", {"vandalism", "destruction"}, {}}},
       {"Rioters", "A mob", "Youths", "Angry residents", "Supporters of a local chief"},
       {"shops", "a police station", "market stalls", "government offices", "vehicles", "a warehouse"}},
      {"Violence against civilians", 0.20, 0.5,
       {"violence", "attacks"},
       {"attacked"},
       {"killed", "terrorism", "war", "injured", "displaced", "crime", "weapons"},
       {{"abducted", {"kidnapping", "abduction"}, {"kidnapped", "abducted"}},
        {"kidnapped", {"kidnapping"}, {"kidnapped", "abducted"}},
        {"assaulted", {"assault", "violence"}, {"beaten", "injured"}},
        {"raped", {"rape", "violence"}, {"raped", "abused"}},
        {"tortured", {"torture"}, {"tortured", "abused"}},
        {"beat", {"assault"}, {"beaten", "injured"}},
        {"threatened", {"threats", "intimidation"}, {"threatened"}},
        {"extorted money from", {"extortion", "crime"}, {"robbed", "threatened"}},
        {"burned the homes of", {"arson"}, {"displaced"}},
        {"abused", {"abuse", "violence"}, {"abused"}},
        {"harassed", {"harassment"}, {"harassed"}}},
       {"Unidentified gunmen", "Armed men", "[ORG] militants", "Bandits", "Suspected jihadists", "Fulani militiamen"},
       {"civilians", "a farmer", "two women", "a village chief", "herders", "a teacher", "several villagers"}},
      {"Strategic developments", 0.13, 0.02,
       {"arrests", "detention"},
       {"detained"},
       {"agreements", "politics", "elections", "weapons", "police", "released", "injured"},
       {{"arrested", {"arrests", "arrest"}, {"arrested", "detained"}},
        {"detained", {"detention", "arrests"}, {"detained", "arrested"}},
        {"captured", {"arrests"}, {"captured", "arrested"}},
        {"signed an agreement with", {"agreements", "negotiations"}, {}},
        {"recruited", {"recruitment"}, {"recruited"}},
        {"took control of", {"takeover"}, {}},
        {"released", {"release"}, {"released", "freed"}},
        {"negotiated with", {"negotiations"}, {}},
        {"seized weapons from", {"weapons", "seizures"}, {}},
        {"established a base in", {"deployment"}, {}},
        {"disarmed", {"disarmament", "weapons"}, {}}},
       {"Police", "Security forces", "The military", "Authorities", "Gendarmes", "[LOC] police"},
       {"a senior commander", "suspects", "community leaders", "several members of [ORG]", "[NAME]",
        "a militia leader"}},
  };
  return p;
}

const std::vector<verb>& shared_verbs() {
  static const std::vector<verb> v{{"confronted", {}, {}},
                                   {"targeted", {"attacks"}, {}},
                                   {"were involved in an incident with", {}, {}},
                                   {"moved against", {}, {}},
                                   {"encountered", {}, {}}};
  return v;
}

const std::vector<std::string> distractors{
    "fireworks", "bicycles", "motorcycles", "cycling", "suicide",  "football", "music",     "weddings",
    "tourism",   "food",      "water",       "money",   "religion", "children", "animals",   "cars",
    "drugs",     "sports",    "dancing",     "cooking", "travel",   "business", "education", "health",
    "art",       "history",   "science",     "horses",  "trains",   "flowers",  "games",     "shopping",
    "farming",   "fishing",   "hunting",     "camels",  "festivals", "prayers", "funerals",  "traffic",
    "weather",   "floods",    "drought",     "disease", "famine",   "refugees", "migration", "smuggling",
    "corruption", "crime",    "police",      "soldiers", "guns",    "weapons",  "war",       "terrorism",
    "violence",  "attacks",   "strikes",     "elections", "politics", "fire",   "agreements", "negotiations"};

const std::vector<std::string> people_distractors{
    "there",   "present", "involved", "here",     "happy",   "angry",    "afraid",   "shocked",  "surprised",
    "killed",  "injured", "wounded",  "hurt",     "arrested", "detained", "displaced", "evacuated", "hospitalized",
    "shot",    "homeless", "missing", "trapped",  "affected", "rescued",  "dispersed", "released", "freed",
    "safe",    "fine",    "gone",     "dead",     "alive",    "sick",     "tired",     "hungry",   "poor",
    "left",    "warned",  "told",     "sent",     "moved",    "taken",    "held",      "seen",     "found",
    "notified", "questioned", "interviewed", "captured", "attacked", "beaten", "robbed", "threatened",
    "harassed", "abused", "tortured", "raped",   "kidnapped", "abducted", "protesting", "gathered",
    "demonstrating", "marching", "striking", "chanting", "recruited", "executed", "beheaded", "burned", "stabbed"};

struct place {
  const char* country;
  const char* region;
  std::vector<std::string> towns;
};

const std::vector<std::string> shared_actors{"Unidentified armed men", "Local residents", "Youths", "Security forces",
                                            "A group of men", "Members of [ORG]", "Villagers", "Fighters"};
const std::vector<std::string> shared_targets{"people", "residents", "a group of villagers", "local officials",
                                             "members of [ORG]", "traders", "the population"};

const std::vector<place>& places() {
  static const std::vector<place> p{
      {"Mali", "Western Africa", {"Gao", "Bamako", "Mopti", "Kidal", "Timbuktu", "Menaka"}},
      {"Burkina Faso", "Western Africa", {"Djibo", "Ouagadougou", "Dori", "Kaya", "Fada N'Gourma"}},
      {"Nigeria", "Western Africa", {"Maiduguri", "Kaduna", "Zamfara", "Lagos", "Jos"}},
      {"Sudan", "Northern Africa", {"Khartoum", "El Fasher", "Nyala", "Omdurman"}},
      {"Ethiopia", "Eastern Africa", {"Mekelle", "Gondar", "Adama", "Dire Dawa"}},
      {"Somalia", "Eastern Africa", {"Mogadishu", "Baidoa", "Kismayo", "Beledweyne"}},
  };
  return p;
}

const std::vector<std::string> months{"January", "February", "March",     "April",   "May",      "June",
                                      "July",    "August",   "September", "October", "November", "December"};

template <typename T>
const T& pick(const std::vector<T>& v, prent::random::engine& rng) {
  return v[static_cast<std::size_t>(prent::random::uniform_below(rng, v.size()))];
}

/// Zipf-like draw: early entries are common, late ones rare
template <typename T>
const T& pick_zipf(const std::vector<T>& v, prent::random::engine& rng) {
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) total += 1.0 / std::pow(i + 1.0, 1.1);
  double u = prent::random::uniform_unit(rng) * total;
  for (std::size_t i = 0; i < v.size(); ++i) {
    u -= 1.0 / std::pow(i + 1.0, 1.1);
    if (u <= 0) return v[i];
  }
  return v.back();
}

bool chance(prent::random::engine& rng, double p) { return prent::random::uniform_unit(rng) < p; }

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

const char* number_word(int n) {
  static const char* w[] = {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};
  return n >= 0 && n <= 10 ? w[n] : nullptr;
}

std::string count_text(int n) {
  if (const char* w = number_word(n)) return w;
  return std::to_string(n);
}

} // namespace

world::world(std::uint64_t seed) : rng_(seed) {}

std::vector<std::string> world::type_names() const {
  std::vector<std::string> out;
  for (const auto& p : profiles()) out.push_back(p.name);
  return out;
}

latent_event world::sample(const std::string& id) {
  const auto& ps = profiles();
  double u = prent::random::uniform_unit(rng_), acc = 0;
  const profile* pr = &ps.back();
  for (const auto& p : ps) {
    acc += p.weight;
    if (u < acc) {
      pr = &p;
      break;
    }
  }
  latent_event e;
  e.id = id;
  e.type = pr->name;

  const auto& where = pick(places(), rng_);
  e.country = where.country;
  e.region = where.region;
  const auto& town = pick(where.towns, rng_);
  const int year = 2019 + static_cast<int>(prent::random::uniform_below(rng_, 3));
  const int month = 1 + static_cast<int>(prent::random::uniform_below(rng_, 12));
  const int day = 1 + static_cast<int>(prent::random::uniform_below(rng_, 28));
  e.date = {year, month, day};

  const bool ambiguous = chance(rng_, 0.35);
  const verb& v = ambiguous ? pick(shared_verbs(), rng_) : pick_zipf(pr->verbs, rng_);
  e.actor = chance(rng_, 0.6) ? pick(shared_actors, rng_) : pick(pr->actors, rng_);
  e.target = chance(rng_, 0.6) ? pick(shared_targets, rng_) : pick(pr->targets, rng_);

  // the underlying event keeps its type-specific meaning even when the wording is vague
  // ...and the models sometimes read a vague report as a different kind of event
  const profile& seen = ambiguous && chance(rng_, 0.35) ? pick(ps, rng_) : *pr;
  const verb& meaning = ambiguous ? pick_zipf(seen.verbs, rng_) : v;
  e.involves.insert(meaning.involves.begin(), meaning.involves.end());
  e.people.insert(meaning.people.begin(), meaning.people.end());
  e.involves.insert(pick(seen.base_involves, rng_));
  if (chance(rng_, 0.6)) e.involves.insert(pick(seen.base_involves, rng_));
  if (chance(rng_, 0.7)) e.people.insert(pick(seen.base_people, rng_));
  e.plausible.insert(pr->plausible.begin(), pr->plausible.end());

  if (chance(rng_, pr->fatal_rate)) e.fatalities = 1 + static_cast<int>(prent::random::uniform_below(rng_, 12));

  std::string d;
  if (chance(rng_, 0.5)) d += "On " + std::to_string(day) + " " + months[static_cast<std::size_t>(month - 1)] + " " +
                              std::to_string(year) + ", ";
  if (!d.empty() && prent::text::starts_with(e.actor, "The ")) e.actor[0] = 't';
  d += e.actor;
  d += " " + std::string(v.phrase) + " " + e.target;
  static const std::vector<std::string> preps{" in ", " near ", " outside ", " in the area of "};
  d += pick(preps, rng_) + town + ".";

  if (e.fatalities > 0 && chance(rng_, 0.75)) {
    e.death_mentioned = true;
    const auto n = count_text(e.fatalities);
    static const std::vector<std::string> forms{"{n} people were killed.", "The attack left {n} dead.",
                                                "{N} fatalities were reported.", "It claimed {n} lives.",
                                                "{N} civilians died."};
    auto f = pick(forms, rng_);
    f = prent::text::replace_all(f, "{n}", n == "one" && f.find("people") != std::string::npos ? "one person" : n);
    f = prent::text::replace_all(f, "{N}", capitalize(n));
    f = prent::text::replace_all(f, "one person people", "one person");
    d += " " + prent::text::replace_all(f, "one person were", "one person was");
  } else if (e.fatalities == 0 && chance(rng_, 0.3)) {
    if (chance(rng_, 0.5)) {
      d += " Several people were injured.";
      e.people.insert("injured");
      e.people.insert("hurt");
      e.involves.insert("injuries");
    } else {
      d += " No casualties were reported.";
    }
  }
  if (e.death_mentioned) {
    e.people.insert("killed");
    e.involves.insert("killing");
    e.involves.insert("deaths");
  }
  if (chance(rng_, 0.12)) d += " [size: no report]";
  if (chance(rng_, 0.1)) d += " [" + std::string(chance(rng_, 0.5) ? "note: " : "source: ") + "local media]";
  e.description = d;
  return e;
}

//
// oracle

void oracle::add_event(const latent_event& e, const std::string& cleaned) {
  auto p = std::make_shared<latent_event>(e);
  p->description = cleaned;
  events_[cleaned] = p;
  source_[cleaned] = cleaned;
}

void oracle::alias(const std::string& description, const std::string& source) {
  auto it = events_.find(source);
  if (it == events_.end()) throw std::logic_error("alias to unknown description");
  events_[description] = it->second;
  source_.emplace(description, source);
}

void oracle::add_template(const std::string& family, const std::string& text) {
  for (const auto& t : templates_)
    if (t.second == text) return;
  templates_.emplace_back(family, text);
}

const latent_event* oracle::event_of(std::string_view description) const {
  auto it = events_.find(description);
  return it == events_.end() ? nullptr : it->second.get();
}

const std::string& oracle::canonical(std::string_view description) const { return source_.find(description)->second; }

std::optional<std::pair<std::string, std::string>> oracle::split_prompt(std::string_view prompt,
                                                                        std::string& description) const {
  for (const auto& [family, text] : templates_) {
    const auto suffix = " " + text;
    if (prompt.size() > suffix.size() && prent::text::ends_with(prompt, suffix)) {
      description = std::string(prompt.substr(0, prompt.size() - suffix.size()));
      if (events_.count(description)) return std::pair{family, text};
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::string, std::string>> oracle::parse_hypothesis(std::string_view h) const {
  for (const auto& [family, text] : templates_) {
    const auto at = text.find(prent::mask_marker);
    const auto pre = std::string_view(text).substr(0, at);
    const auto post = std::string_view(text).substr(at + prent::mask_marker.size());
    if (h.size() > pre.size() + post.size() && prent::text::starts_with(h, pre) && prent::text::ends_with(h, post))
      return std::pair{family, std::string(h.substr(pre.size(), h.size() - pre.size() - post.size()))};
  }
  return std::nullopt;
}

const std::vector<std::string>& oracle::universe(const std::string& family) const {
  static const std::vector<std::string> involves = [] {
    std::set<std::string> all(distractors.begin(), distractors.end());
    for (const auto& p : profiles()) {
      all.insert(p.base_involves.begin(), p.base_involves.end());
      for (const auto& v : p.verbs) all.insert(v.involves.begin(), v.involves.end());
    }
    all.insert({"killing", "deaths", "injuries", "attacks"});
    return std::vector<std::string>(all.begin(), all.end());
  }();
  static const std::vector<std::string> people = [] {
    std::set<std::string> all(people_distractors.begin(), people_distractors.end());
    for (const auto& p : profiles()) {
      all.insert(p.base_people.begin(), p.base_people.end());
      for (const auto& v : p.verbs) all.insert(v.people.begin(), v.people.end());
    }
    return std::vector<std::string>(all.begin(), all.end());
  }();
  return family == "people" ? people : involves;
}

//
// simulated models

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash(std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto p : parts) {
    for (unsigned char c : p) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h = mix(h);
  }
  return h;
}

/// standard normal from a hash (Box-Muller)
double gauss(std::uint64_t h) {
  const double u1 = (static_cast<double>(mix(h) >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(mix(h ^ 0x5851f42d4c957f2dULL) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double unit(std::uint64_t h) { return static_cast<double>(mix(h) >> 11) * 0x1.0p-53; }

bool truly(const latent_event& e, const std::string& family, const std::string& token) {
  const auto& s = family == "people" ? e.people : e.involves;
  return s.count(token) != 0;
}

/// repeated adjacent words and dropped words both push a prompt away from fluent text
double distortion(const std::string& template_text, const std::string& description, const std::string& canonical) {
  const auto words = prent::text::split_whitespace(template_text);
  double d = 0;
  for (std::size_t i = 1; i < words.size(); ++i)
    if (prent::text::to_lower_ascii(words[i]) == prent::text::to_lower_ascii(words[i - 1])) d += 1;
  const auto n0 = static_cast<double>(prent::text::split_whitespace(canonical).size());
  const auto n1 = static_cast<double>(prent::text::split_whitespace(description).size());
  if (n0 > 0) d += 2.0 * std::abs(n0 - n1) / n0;
  if (description != canonical) d += 0.3;
  return d;
}

class sim_fill final : public prent::mask_filler {
public:
  explicit sim_fill(std::shared_ptr<const oracle> o) : o_(std::move(o)) {}

  std::vector<prent::mask_fill_result> fill_mask(std::string_view prompt, std::size_t k) const override {
    prent::require_single_mask(prompt);
    std::string description;
    const auto split = o_->split_prompt(prompt, description);
    if (!split) throw prent::fixture_miss("simulator does not know prompt \"" + std::string(prompt) + "\"");
    const auto& [family, template_text] = *split;
    const auto& e = *o_->event_of(description);
    const double d = distortion(template_text, description, o_->canonical(description));

    const auto& universe = o_->universe(family);
    std::vector<double> logit(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
      const auto& tok = universe[i];
      const bool real = truly(e, family, tok);
      const bool typical = e.plausible.count(tok) != 0;
      double z = 1.2 * gauss(hash({"prior", family, tok}));
      if (real) z += 3.4;
      if (typical) z += 2.2;
      z += 0.6 * gauss(hash({"event", e.id, family, tok}));
      z += (real ? 0.25 : 0.8) * gauss(hash({"surface", prompt, tok}));
      z += (real ? 0.35 : 0.7) * d * gauss(hash({"distort", family, tok}));
      logit[i] = z;
    }
    const double top = *std::max_element(logit.begin(), logit.end());
    double sum = 0;
    for (auto& z : logit) sum += (z = std::exp(z - top));
    std::vector<prent::mask_fill_result> out;
    for (std::size_t i = 0; i < universe.size(); ++i) out.push_back({universe[i], logit[i] / sum});
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    if (k < out.size()) out.resize(k);
    return out;
  }
  std::string model_id() const override { return "simulated-fill"; }

private:
  std::shared_ptr<const oracle> o_;
};

class sim_nli final : public prent::entailment_model {
public:
  explicit sim_nli(std::shared_ptr<const oracle> o) : o_(std::move(o)) {}

  prent::entailment_score entailment_probability(std::string_view premise, std::string_view hypothesis) const override {
    const auto* e = o_->event_of(premise);
    const auto parsed = o_->parse_hypothesis(hypothesis);
    if (!e || !parsed) throw prent::fixture_miss("simulator cannot judge \"" + std::string(hypothesis) + "\"");
    const auto& [family, tok] = *parsed;
    double rel = truly(*e, family, tok) ? 1.0 : e->plausible.count(tok) ? 0.3 : 0.0;
    const double z = 5.0 * rel - 2.5 + 1.1 * gauss(hash({"nli", premise, hypothesis}));
    return {1.0 / (1.0 + std::exp(-z))};
  }
  std::string model_id() const override { return "simulated-nli"; }

private:
  std::shared_ptr<const oracle> o_;
};

class sim_qa final : public prent::question_answerer {
public:
  explicit sim_qa(std::shared_ptr<const oracle> o) : o_(std::move(o)) {}

  prent::span_answer extractive_answer(std::string_view question, std::string_view context,
                                       double min_confidence) const override {
    const auto* e = o_->event_of(context);
    if (!e) throw prent::fixture_miss("simulator does not know context \"" + std::string(context) + "\"");
    std::string action;
    bool who = false;
    if (prent::text::starts_with(question, "Who was ") && prent::text::ends_with(question, "?")) {
      action = std::string(question.substr(8, question.size() - 9));
    } else if (prent::text::starts_with(question, "Who ") && prent::text::ends_with(question, " people?")) {
      action = std::string(question.substr(4, question.size() - 12));
      who = true;
    } else {
      throw prent::no_answer("unsupported question");
    }
    const auto& span = who ? e->actor : e->target;
    const auto at = context.find(span);
    const auto h = hash({"qa", question, context});
    if (at == std::string_view::npos || unit(h) < 0.1) throw prent::no_answer("no answer");
    const bool fits = e->people.count(action) != 0;
    const double conf = fits ? 0.15 + 0.8 * unit(h ^ 1) : 0.02 + 0.12 * unit(h ^ 2);
    if (conf < min_confidence) throw prent::no_answer("below floor");
    return {span, at, at + span.size(), conf};
  }
  std::string model_id() const override { return "simulated-qa"; }

private:
  std::shared_ptr<const oracle> o_;
};

} // namespace

prent::backends simulated_backends(std::shared_ptr<const oracle> o) {
  return {std::make_shared<sim_fill>(o), std::make_shared<sim_nli>(o), std::make_shared<sim_qa>(o)};
}

} // namespace synth
