// Acceptance runner: one PASS/FAIL/SKIP line per criterion.
//
//   prent-acceptance [--criterion ID]... [--list]
//
// Exit status is 1 when any selected criterion fails, 77 when every selected
// criterion was skipped, 0 otherwise.

#include "bundled.hpp"
#include "pipeline_properties.hpp"
#include "rule_oracle.hpp"
#include "split_properties.hpp"

#include "prent/backend_config.hpp"
#include "prent/error.hpp"
#include "prent/random.hpp"
#include "prent/robustness.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace prent;
namespace fs = std::filesystem;

namespace {

enum class status { pass, fail, skip };

struct verdict {
  status outcome;
  std::string detail;
};

verdict pass_if(bool ok, std::string detail) { return {ok ? status::pass : status::fail, std::move(detail)}; }
verdict skipped(std::string why) { return {status::skip, std::move(why)}; }

struct criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<verdict()> run;
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

//
// reference checkpoints

struct reference_models {
  std::optional<backends> models;
  std::string missing;
  std::string ids;
};

reference_models load_reference(unsigned needed) {
  reference_models out;
  backend_config cfg;
  try {
    cfg = backend_config::load(std::nullopt);
  } catch (const std::exception& e) {
    out.missing = std::string("backend configuration: ") + e.what();
    return out;
  }
  if (cfg.kind != backend_kind::checkpoint) {
    out.missing = "PRENT_BACKEND selects mocks; this criterion needs the reference checkpoints";
    return out;
  }
  std::vector<std::string> wanted;
  if (needed & need_fill) wanted.push_back(cfg.fill_model_id);
  if (needed & need_nli) wanted.push_back(cfg.nli_model_id);
  if (needed & need_qa) wanted.push_back(cfg.qa_model_id);
  for (const auto& id : wanted) {
    if (!out.ids.empty()) out.ids += ", ";
    out.ids += id;
    if (!find_checkpoint(id, cfg.model_root)) {
      if (!out.missing.empty()) out.missing += ", ";
      out.missing += id;
    }
  }
  if (!out.missing.empty()) {
    out.missing = "checkpoints not found (" + out.missing + "); set PRENT_MODEL_ROOT or populate the HF cache";
    return out;
  }
  try {
    out.models = make_backends(cfg, needed);
  } catch (const std::exception& e) {
    out.missing = std::string("loading checkpoints failed: ") + e.what();
  }
  return out;
}

//
// criteria

verdict table_reproduction() {
  const auto ref = load_reference(need_fill | need_nli);
  if (!ref.models) return skipped(ref.missing);
  struct row {
    prompt_template templ;
    std::vector<std::string> top10;
    std::set<std::string> entailed;
  };
  const std::vector<row> rows{
      {people_template(),
       {"arrested", "killed", "hospitalized", "injured", "evacuated", "wounded", "shot", "homeless", "hurt",
        "detained"},
       {"injured", "wounded", "hurt"}},
      {involves_template(),
       {"fireworks", "demonstrations", "protests", "violence", "suicide", "bicycles", "shooting", "strikes",
        "motorcycles", "cycling"},
       {"demonstrations", "protests", "violence"}},
  };
  const event_description event("Several demonstrators were injured.");
  pipeline_config cfg;
  cfg.top_k = 10;
  cfg.entail_threshold = 0.5;
  bool ok = true;
  std::string detail = "models " + ref.ids;
  for (const auto& r : rows) {
    const std::vector<prompt_template> one{r.templ};
    const auto result = pr_ent(*ref.models, event, one, cfg);
    const auto& o = result.at(r.templ.id);
    if (o.failure) std::rethrow_exception(o.failure);
    const auto got = o.candidates->tokens();
    std::size_t overlap = 0;
    for (const auto& t : got)
      if (std::find(r.top10.begin(), r.top10.end(), t) != r.top10.end()) ++overlap;
    const auto entailed = o.entailed->tokens();
    const std::set<std::string> ent(entailed.begin(), entailed.end());
    std::size_t extras = 0;
    bool covers = true;
    for (const auto& t : r.entailed) covers = covers && ent.count(t);
    for (const auto& t : ent) extras += r.entailed.count(t) ? 0 : 1;
    const bool row_ok = overlap >= 7 && covers && extras <= 2;
    ok = ok && row_ok;
    detail += "; " + r.templ.id + ": overlap " + std::to_string(overlap) + "/10, expected set " +
              (covers ? "covered" : "NOT covered") + ", extras " + std::to_string(extras);
  }
  return pass_if(ok, detail);
}

verdict pipeline_invariants() {
  const auto tally = testing::check_pipeline_properties(1000, 20221);
  std::string detail = std::to_string(tally.cases) + " cases per property";
  for (const auto& [name, n] : tally.violations) detail += ", " + name + " " + std::to_string(n);
  return pass_if(tally.cases == 1000 && tally.total_violations() == 0, detail);
}

verdict sweep_identities() {
  const auto& b = testing::bundled();
  feature_options fo;
  fo.top_k = 30;
  fo.threshold = 0.5;
  const auto bow = evaluate_mode(b.split.train, b.split.test, {feature_mode::bow}, nullptr);
  auto pr_opts = fo;
  pr_opts.mode = feature_mode::pr;
  const auto pr = evaluate_mode(b.split.train, b.split.test, pr_opts, &b.involves);
  const auto k = sweep(b.split.train, b.split.test, sweep_parameter::top_k, {0.0}, fo, b.involves);
  const auto t = sweep(b.split.train, b.split.test, sweep_parameter::threshold, {0.0, 1.0}, fo, b.involves);
  const bool ok = k.f1[0] == bow.f1 && t.f1[0] == pr.f1 && t.f1[1] == bow.f1;
  return pass_if(ok, "F1(K=0) " + num(k.f1[0], 6) + " vs bow " + num(bow.f1, 6) + "; F1(thr=0) " + num(t.f1[0], 6) +
                         " vs pr " + num(pr.f1, 6) + "; F1(thr=1) " + num(t.f1[1], 6) + " vs bow");
}

verdict lethal_structure() {
  const auto& b = testing::bundled();
  const auto r = lethal_rule_eval(b.records, b.people, pipeline_config{});
  const bool ok = r.pr.recall >= r.prent.recall && r.prent.fp <= r.pr.fp;
  return pass_if(ok, std::to_string(r.events) + " events; recall PR " + num(r.pr.recall) + " >= PR-ENT " +
                         num(r.prent.recall) + "; FP PR-ENT " + std::to_string(r.prent.fp) + " <= PR " +
                         std::to_string(r.pr.fp));
}

verdict lethal_gtd_gap() {
  const char* path = std::getenv("PRENT_GTD_CORPUS");
  if (path == nullptr || *path == '\0') return skipped("PRENT_GTD_CORPUS names no user-supplied GTD-style corpus");
  const auto ref = load_reference(need_fill | need_nli);
  if (!ref.models) return skipped(ref.missing);
  std::vector<event_record> records;
  read_options opts;
  opts.columns = column_mapping::preset("gtd");
  try {
    records = read_corpus(path, opts);
  } catch (const parse_error&) {
    records = read_corpus(path);
  }
  std::vector<event_record> with_fatalities;
  for (auto& r : records)
    if (r.fatalities) with_fatalities.push_back(std::move(r));
  if (with_fatalities.size() < 100)
    return {status::fail, "only " + std::to_string(with_fatalities.size()) + " descriptions with fatality counts"};
  pipeline_config cfg;
  const auto outputs = run_pipeline(*ref.models, with_fatalities, people_template(), cfg);
  const auto r = lethal_rule_eval(with_fatalities, outputs, cfg);
  const double gap = r.prent.precision - r.pr.precision;
  return pass_if(gap >= 0.15, std::to_string(r.events) + " events; precision PR-ENT " + num(r.prent.precision) +
                                  " - PR " + num(r.pr.precision) + " = " + num(gap) + " (need >= 0.15)");
}

std::vector<perturbation_spec> robustness_specs() {
  std::vector<perturbation_spec> out;
  for (auto [k, i] : {std::pair{perturbation_kind::paraphrase, 1}, {perturbation_kind::stopword_removal, 1},
                      {perturbation_kind::entity_removal, 1}, {perturbation_kind::duplication, 1},
                      {perturbation_kind::duplication, 2}}) {
    perturbation_spec s;
    s.kind = k;
    s.intensity = i;
    out.push_back(s);
  }
  return out;
}

verdict judge_robustness(const robustness_report& report, std::string& detail) {
  bool ok = true;
  const robustness_row* dup1 = nullptr;
  const robustness_row* dup2 = nullptr;
  for (const auto& row : report.rows) {
    if (row.spec.kind == perturbation_kind::duplication && row.spec.intensity == 2) {
      dup2 = &row;
      continue;
    }
    if (row.spec.kind == perturbation_kind::duplication) dup1 = &row;
    const bool row_ok = row.prent.mean < row.pr.mean;
    ok = ok && row_ok;
    detail += "; " + row.label + " PR-ENT " + num(row.prent.mean) + (row_ok ? " < " : " >= ") + "PR " +
              num(row.pr.mean);
  }
  // a mean over no pairs is not evidence either way
  for (const auto& row : report.rows) {
    if (row.pr.used > 0 && row.prent.used > 0) continue;
    ok = false;
    detail += "; " + row.label + " has no comparable pairs (PR used " + std::to_string(row.pr.used) +
              ", PR-ENT used " + std::to_string(row.prent.used) + " of " + std::to_string(report.events) + ")";
  }
  if (!dup1 || !dup2) return {status::fail, "duplication rows missing"};
  const bool grows = dup2->pr.mean >= dup1->pr.mean && dup2->prent.mean >= dup1->prent.mean;
  ok = ok && grows;
  detail += "; duplication x2 vs x1: PR " + num(dup2->pr.mean) + "/" + num(dup1->pr.mean) + ", PR-ENT " +
            num(dup2->prent.mean) + "/" + num(dup1->prent.mean);
  return pass_if(ok, detail);
}

robustness_report robustness_run(const backends& models) {
  const auto records = read_corpus(testing::data_dir() / "synthetic" / "robustness_events.csv");
  std::vector<event_description> corpus;
  for (const auto& r : records) corpus.emplace_back(r.description);
  const pipeline_config cfg;
  const auto t = involves_template();
  const auto vocab = build_fixed_vocab(models.fill_model(), corpus, t, 100, cfg);
  return run_robustness(models, corpus, t, robustness_specs(), vocab, cfg);
}

verdict robustness_ordering() {
  const auto ref = load_reference(need_fill | need_nli);
  if (!ref.models) {
    // the simulator's numbers say nothing about the reference models; shown for orientation only
    std::string info;
    const auto v = judge_robustness(robustness_run(testing::bundled_models()), info);
    return skipped(ref.missing + " (mock run, informational: " + (v.outcome == status::pass ? "ordering holds" : "ordering fails") +
                   info + ")");
  }
  const auto report = robustness_run(*ref.models);
  std::string detail = std::to_string(report.events) + " events, models " + ref.ids;
  return judge_robustness(report, detail);
}

verdict js_checks() {
  random::engine rng(77);
  double worst_identity = 0.0, worst_disjoint = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + random::uniform_below(rng, 40);
    Eigen::VectorXd p(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = random::uniform_unit(rng);
    worst_identity = std::max(worst_identity, js_distance(p, p));
    // disjoint supports: first half vs second half
    Eigen::VectorXd a = Eigen::VectorXd::Zero(p.size()), b = Eigen::VectorXd::Zero(p.size());
    const auto half = p.size() / 2;
    a.head(half) = p.head(half);
    b.tail(p.size() - half) = p.tail(p.size() - half);
    worst_disjoint = std::max(worst_disjoint, std::abs(js_distance(a, b) - std::sqrt(std::log(2.0))));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "identical max %.3g (tol 1e-12); disjoint max |d - sqrt(ln 2)| %.3g (tol 1e-9)",
                worst_identity, worst_disjoint);
  return pass_if(worst_identity <= 1e-12 && worst_disjoint <= 1e-9, buf);
}

verdict rule_oracle() {
  const auto tally = testing::check_rule_oracle(4);
  // every ordered split of up to 4 literals into clauses of distinct literals, 8 literals available
  constexpr std::size_t expected = 8 + (56 + 64) + (336 + 2 * 448 + 512) + (1680 + 2 * 2688 + 3136 + 3 * 3584 + 4096);
  return pass_if(tally.rules == expected && tally.mismatches == 0,
                 std::to_string(tally.rules) + " rules, " + std::to_string(tally.evaluations) + " assignments, " +
                     std::to_string(tally.mismatches) + " mismatches");
}

verdict classifier_ordering() {
  const auto& b = testing::bundled();
  feature_options fo;
  fo.top_k = 30;
  fo.threshold = 0.5;
  auto acc = [&](feature_mode m) {
    auto o = fo;
    o.mode = m;
    return evaluate_mode(b.split.train, b.split.test, o, m == feature_mode::bow ? nullptr : &b.involves).accuracy;
  };
  const double bow = acc(feature_mode::bow), prent = acc(feature_mode::prent), rnd = acc(feature_mode::random);
  const bool ok = prent >= bow - 0.01 && prent >= rnd;
  return pass_if(ok, std::to_string(b.split.train.size()) + "/" + std::to_string(b.split.test.size()) +
                         " accuracy PR-ENT " + num(prent) + ", BoW " + num(bow) + ", random " + num(rnd));
}

verdict stratified_split_check() {
  const auto& b = testing::bundled();
  auto bundled = testing::check_split(b.records, 600, 200, 0);
  // corpus-scale split at ACLED-like proportions
  const auto big = testing::labeled_records(
      {{"Battles", 1130}, {"Explosions/Remote violence", 620}, {"Protests", 910}, {"Riots", 430},
       {"Strategic developments", 280}, {"Violence against civilians", 630}},
      4);
  auto large = testing::check_split(big, 3000, 1000, 11);
  double worst = std::max({bundled.worst_train_deviation, bundled.worst_test_deviation, large.worst_train_deviation,
                           large.worst_test_deviation});
  bool ok = bundled.within_one() && large.within_one() && bundled.reproducible && large.reproducible &&
            bundled.sizes_exact && large.sizes_exact && bundled.disjoint && large.disjoint;
  // random corpora with rare classes
  random::engine rng(2024);
  std::size_t corpora = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::pair<std::string, std::size_t>> classes;
    const auto k = 1 + random::uniform_below(rng, 6);
    std::size_t total = 0;
    for (std::uint64_t c = 0; c < k; ++c) {
      const auto n = 1 + random::uniform_below(rng, 120);
      classes.emplace_back("c" + std::to_string(c), n);
      total += n;
    }
    if (total < 2) continue;
    const auto n_train = 1 + random::uniform_below(rng, total - 1);
    const auto n_test = 1 + random::uniform_below(rng, total - n_train);
    const auto c = testing::check_split(testing::labeled_records(classes, i), n_train, n_test, i);
    worst = std::max({worst, c.worst_train_deviation, c.worst_test_deviation});
    ok = ok && c.within_one() && c.reproducible && c.sizes_exact && c.disjoint;
    ++corpora;
  }
  return pass_if(ok, "bundled 600/200, 4000 -> 3000/1000 and " + std::to_string(corpora) +
                         " random corpora; worst per-class deviation " + num(worst, 3) + " records (limit 1), reproducible");
}

std::vector<criterion> criteria() {
  return {
      {"1", "candidate and entailed sets for the demonstrators example", 120, table_reproduction},
      {"2", "pipeline invariants on randomized cases", 10, pipeline_invariants},
      {"3", "sweep endpoint identities", 300, sweep_identities},
      {"4a", "lethal rule structural ordering", 300, lethal_structure},
      {"4b", "lethal rule precision gap on GTD-style descriptions", 3600, lethal_gtd_gap},
      {"5", "robustness ordering under perturbations", 1800, robustness_ordering},
      {"6", "Jensen-Shannon closed forms", 10, js_checks},
      {"7", "rule evaluation against truth tables", 1, rule_oracle},
      {"8", "classifier accuracy ordering", 300, classifier_ordering},
      {"9", "stratified split proportions", 60, stratified_split_check},
  };
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks", "prent-acceptance"};
  std::vector<std::string> only;
  bool list = false;
  app.add_option("--criterion", only, "run only these criteria (\"4\" selects 4a and 4b)");
  app.add_flag("--list", list, "list the criteria");
  CLI11_PARSE(app, argc, argv);

  const auto all = criteria();
  if (list) {
    for (const auto& c : all) std::cout << c.id << "  " << c.title << "\n";
    return 0;
  }
  auto selected = [&](const std::string& id) {
    if (only.empty()) return true;
    for (const auto& o : only)
      if (o == id || (id.size() > o.size() && id.compare(0, o.size(), o) == 0 && std::isalpha(id[o.size()])))
        return true;
    return false;
  };

  std::size_t ran = 0, failed = 0, skips = 0;
  for (const auto& c : all) {
    if (!selected(c.id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {status::fail, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.outcome == status::pass && seconds > c.budget_seconds) {
      v.outcome = status::fail;
      v.detail += "; over the " + num(c.budget_seconds, 0) + " s budget";
    }
    const char* tag = v.outcome == status::pass ? "PASS" : v.outcome == status::fail ? "FAIL" : "SKIP";
    std::cout << tag << " [" << c.id << "] " << c.title << ": " << v.detail << " (" << num(seconds, 2) << " s)"
              << std::endl;
    if (v.outcome == status::fail) ++failed;
    if (v.outcome == status::skip) ++skips;
  }
  if (ran == 0) {
    std::cerr << "no criterion matches the selection\n";
    return 2;
  }
  if (failed > 0) return 1;
  return skips == ran ? 77 : 0;
}
