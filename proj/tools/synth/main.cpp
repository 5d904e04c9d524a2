// Generates the bundled synthetic corpora and the mock fixtures that replay
// the simulated models on them.
#include "world.hpp"

#include "prent/benchmark.hpp"
#include "prent/codebook.hpp"
#include "prent/mock_backends.hpp"
#include "prent/robustness.hpp"
#include "prent/roles.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

std::vector<prent::event_record> make_corpus(synth::world& w, synth::oracle& o, const std::string& prefix,
                                             std::size_t n, const fs::path& path) {
  std::vector<prent::event_record> raw;
  std::vector<synth::latent_event> latent;
  for (std::size_t i = 1; i <= n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%s%04zu", prefix.c_str(), i);
    auto e = w.sample(id);
    raw.push_back({e.id, e.description, e.type, e.fatalities, e.date, e.country, e.region});
    latent.push_back(std::move(e));
  }
  prent::write_corpus(path, raw);
  auto records = prent::read_corpus(path);
  for (std::size_t i = 0; i < records.size(); ++i) o.add_event(latent[i], records[i].description);
  return records;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump() << "\n";
}

/// Hand-written fixtures for the canonical examples used in docs and route tests.
prent::mock_fixtures example_fixtures() {
  prent::mock_fixtures f;
  auto fill = [&](const std::string& text, const std::vector<std::string>& tokens) {
    std::vector<prent::mask_fill_result> r;
    double p = 0.16;
    for (const auto& t : tokens) {
      r.push_back({t, p});
      p *= 0.82;
    }
    f.set_fill(text, r);
  };
  auto entail = [&](const std::string& premise, const std::string& templ, const std::vector<std::string>& tokens,
                    const std::map<std::string, double>& high) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = high.find(tokens[i]);
      const std::string hyp =
          prent::fill_template({"t", templ}, tokens[i]);
      f.set_entailment(premise, hyp, it != high.end() ? it->second : 0.02 + 0.01 * static_cast<double>(i % 7));
    }
  };
  const std::string demo = "Several demonstrators were injured.";
  const std::vector<std::string> people{"arrested",  "killed",   "hospitalized", "injured",  "evacuated", "wounded",
                                        "shot",      "homeless", "hurt",         "detained", "released",  "displaced",
                                        "beaten",    "missing",  "trapped",      "dispersed", "stabbed",  "rescued",
                                        "attacked",  "affected", "treated",      "present",  "there",     "involved",
                                        "protesting", "gathered", "dead",        "safe",     "taken",     "held"};
  const std::vector<std::string> involves{"fireworks", "demonstrations", "protests", "violence",  "suicide",
                                          "bicycles",  "shooting",       "strikes",  "motorcycles", "cycling",
                                          "riots",     "police",         "injuries", "clashes",   "football",
                                          "children",  "music",          "guns",     "students",  "drugs",
                                          "cars",      "politics",       "fire",     "accidents", "weapons",
                                          "elections", "horses",         "water",    "money",     "religion"};
  fill(demo + " People were [Z].", people);
  fill(demo + " This event involves [Z].", involves);
  entail(demo, "People were [Z].", people, {{"injured", 0.991}, {"wounded", 0.962}, {"hurt", 0.948}});
  entail(demo, "This event involves [Z].", involves,
         {{"demonstrations", 0.934}, {"protests", 0.947}, {"violence", 0.712}});

  const std::string military = "Military injured two civilians.";
  const std::vector<std::string> mpeople{"killed", "injured", "wounded", "arrested", "hurt", "shot", "detained",
                                         "evacuated", "displaced", "attacked"};
  fill(military + " People were [Z].", mpeople);
  entail(military, "People were [Z].", mpeople, {{"injured", 0.987}, {"hurt", 0.902}, {"wounded", 0.874}});
  for (const std::string a : {"injured", "hurt", "wounded"}) {
    const auto q = prent::build_role_questions(a);
    f.set_answer(q.who, military, prent::span_answer{"Military", 0, 8, a == "injured" ? 0.63 : 0.41});
    f.set_answer(q.whom, military, prent::span_answer{"two civilians", 17, 30, a == "injured" ? 0.88 : 0.52});
  }

  const std::string kidnap = "Two men were kidnapped by rebels.";
  const std::vector<std::string> kinvolves{"kidnapping", "violence", "abduction", "rebels", "terrorism",
                                           "crime",      "hostages", "war",       "money",  "children"};
  const std::vector<std::string> kpeople{"kidnapped", "killed", "abducted", "taken", "released",
                                         "arrested",  "missing", "rescued", "held",  "freed"};
  fill(kidnap + " This event involves [Z].", kinvolves);
  fill(kidnap + " People were [Z].", kpeople);
  entail(kidnap, "This event involves [Z].", kinvolves, {{"kidnapping", 0.981}, {"abduction", 0.944}, {"hostages", 0.63}});
  entail(kidnap, "People were [Z].", kpeople, {{"kidnapped", 0.992}, {"abducted", 0.968}, {"taken", 0.71}, {"held", 0.58}});
  for (const std::string a : {"kidnapped", "abducted", "taken", "held"}) {
    const auto q = prent::build_role_questions(a);
    f.set_answer(q.who, kidnap, prent::span_answer{"rebels", 26, 32, 0.57});
    f.set_answer(q.whom, kidnap, prent::span_answer{"Two men", 0, 7, 0.81});
  }

  const std::string sponsor = "The sponsorship deal between the shoes brand and the soccer team was confirmed.";
  const std::vector<std::string> sinvolves{"sponsorship", "football", "sponsors", "money",    "advertising",
                                           "sports",      "soccer",   "shoes",    "business", "competitions"};
  const std::vector<std::string> speople{"involved", "paid", "sponsored", "employed", "excited",
                                         "happy",    "there", "present",  "invited",  "selected"};
  fill(sponsor + " This event involves [Z].", sinvolves);
  fill(sponsor + " People were [Z].", speople);
  entail(sponsor, "This event involves [Z].", sinvolves,
         {{"sponsorship", 0.986}, {"sponsors", 0.903}, {"advertising", 0.655}, {"competitions", 0.571}});
  entail(sponsor, "People were [Z].", speople, {});

  // one description, several event types
  const std::string clash =
      "The militants clashed with soldiers, and killed one civilian driver and abducted two others.";
  const std::vector<std::string> cinvolves{"violence", "fighting", "killing", "kidnapping", "terrorism",
                                           "war",      "shooting", "murder",  "clashes",    "children"};
  const std::vector<std::string> cpeople{"killed", "abducted", "kidnapped", "injured", "wounded",
                                         "taken",  "arrested", "missing",   "shot",    "released"};
  fill(clash + " This event involves [Z].", cinvolves);
  fill(clash + " People were [Z].", cpeople);
  entail(clash, "This event involves [Z].", cinvolves,
         {{"violence", 0.93}, {"fighting", 0.91}, {"killing", 0.95}, {"kidnapping", 0.88}, {"clashes", 0.9}});
  entail(clash, "People were [Z].", cpeople, {{"killed", 0.97}, {"abducted", 0.94}, {"kidnapped", 0.89}, {"taken", 0.6}});

  const std::string arrest = "Arrests: police captured a senior commander.";
  const std::vector<std::string> apeople{"arrested", "captured", "detained", "killed", "held",
                                         "taken",    "released", "freed",    "charged", "questioned"};
  fill(arrest + " People were [Z].", apeople);
  entail(arrest, "People were [Z].", apeople, {{"arrested", 0.95}, {"captured", 0.93}, {"detained", 0.9}, {"held", 0.62}});
  auto span = [](const std::string& context, const std::string& part, double conf) {
    const auto at = context.find(part);
    return prent::span_answer{part, at, at + part.size(), conf};
  };
  for (const std::string a : {"arrested", "captured", "detained", "held"}) {
    const auto q = prent::build_role_questions(a);
    f.set_answer(q.who, arrest, span(arrest, "police", 0.72));
    f.set_answer(q.whom, arrest, span(arrest, "a senior commander", 0.66));
  }
  // nobody in the context flies: the QA model abstains
  f.set_answer("Who flew?", "The storm damaged several houses.", std::nullopt);
  return f;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic corpora and mock fixtures"};
  fs::path root = ".";
  std::uint64_t seed = 20221;
  std::size_t events = 800, robustness_events = 100;
  app.add_option("--root", root, "repository root to write under");
  app.add_option("--seed", seed, "world seed");
  app.add_option("--events", events, "labeled corpus size");
  app.add_option("--robustness-events", robustness_events, "perturbation corpus size");
  fs::path codebook_path;
  app.add_option("--codebook", codebook_path, "codebook whose queries are recorded (default: the bundled one)");
  CLI11_PARSE(app, argc, argv);

  const auto out = root / "data" / "synthetic";
  fs::create_directories(out);
  fs::create_directories(root / "data" / "fixtures");

  auto o = std::make_shared<synth::oracle>();
  synth::world w(seed);
  const auto involves = prent::involves_template();
  const auto people = prent::people_template();
  o->add_template("involves", involves.text);
  o->add_template("people", people.text);

  const auto records = make_corpus(w, *o, "e", events, out / "events.csv");
  synth::world rw(seed ^ 0x5bd1e995ULL);
  const auto rrecords = make_corpus(rw, *o, "r", robustness_events, out / "robustness_events.csv");

  // perturbed prompts resolve to the event they came from
  std::vector<prent::perturbation_spec> specs;
  auto spec = [&](prent::perturbation_kind k, int i) {
    prent::perturbation_spec s;
    s.kind = k;
    s.intensity = i;
    specs.push_back(s);
  };
  spec(prent::perturbation_kind::identity, 1);
  spec(prent::perturbation_kind::paraphrase, 1);
  spec(prent::perturbation_kind::paraphrase, 2);
  spec(prent::perturbation_kind::stopword_removal, 1);
  spec(prent::perturbation_kind::entity_removal, 1);
  spec(prent::perturbation_kind::duplication, 1);
  spec(prent::perturbation_kind::duplication, 2);
  for (const auto& p : prent::default_paraphrases()) o->add_template("involves", p);
  std::vector<prent::event_description> rcorpus;
  for (const auto& r : rrecords) rcorpus.emplace_back(r.description);
  for (const auto& s : specs) {
    for (const auto& e : rcorpus) {
      const auto p = prent::perturb(e, involves, s);
      o->add_template("involves", p.templ.text);
      const auto moved = prent::event_description(p.event).text();
      if (moved != e.text()) o->alias(moved, e.text());
    }
  }

  prent::fixture_recorder recorder(synth::simulated_backends(o));
  const auto models = recorder.recording();

  prent::pipeline_config wide;
  wide.top_k = 40;
  prent::run_pipeline(models, records, involves, wide);
  prent::run_pipeline(models, records, people, wide);
  std::cerr << "recorded pipeline outputs for " << records.size() << " events\n";

  if (codebook_path.empty()) codebook_path = root / "data" / "codebooks" / "acled_core.json";
  const auto cb = prent::load_codebook(codebook_path);
  const prent::pipeline_config defaults;
  const std::vector<prent::prompt_template> role_templates{people};
  for (const auto& r : records) {
    const prent::event_description e(r.description);
    prent::code_event(models, e, cb, defaults);
    const auto result = prent::pr_ent(models, e, role_templates, defaults);
    for (const auto& tok : result.at(people.id).entailed->tokens()) prent::extract_roles(models.qa_model(), e, tok);
  }
  std::cerr << "recorded codebook and role queries\n";

  const auto vocab = prent::build_fixed_vocab(models.fill_model(), rcorpus, involves, 100, defaults);
  const auto report = prent::run_robustness(models, rcorpus, involves, specs, vocab, defaults);
  std::cerr << report.to_table();

  write_json(out / "mock_fixtures.json", recorder.snapshot().to_json());
  write_json(root / "data" / "fixtures" / "examples.json", example_fixtures().to_json());
  return 0;
}
