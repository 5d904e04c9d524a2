#include "cli.hpp"

#include "svg_plot.hpp"

#include "prent/backend_config.hpp"
#include "prent/benchmark.hpp"
#include "prent/codebook.hpp"
#include "prent/corpus.hpp"
#include "prent/error.hpp"
#include "prent/robustness.hpp"
#include "prent/roles.hpp"
#include "prent/service.hpp"
#include "prent/text.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace prent::cli {

namespace fs = std::filesystem;

namespace {

struct common_options {
  std::optional<fs::path> config;
  std::vector<fs::path> mock;
  std::size_t top_k = 30;
  double threshold = 0.5;
  unsigned workers = 1;
  std::string preset = "default";

  backend_config backend() const {
    auto cfg = backend_config::load(config);
    if (!mock.empty()) {
      cfg.kind = backend_kind::mock;
      cfg.mock_fixtures = mock;
    }
    return cfg;
  }

  pipeline_config pipeline() const {
    pipeline_config p;
    p.top_k = top_k;
    p.entail_threshold = threshold;
    p.validate();
    return p;
  }

  read_options reading() const {
    read_options r;
    r.columns = column_mapping::preset(preset);
    return r;
  }
};

void add_common(CLI::App* cmd, common_options& o) {
  cmd->add_option("--config", o.config, "backend configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--mock", o.mock, "replay mock fixtures instead of loading models")->check(CLI::ExistingFile);
  cmd->add_option("--top-k", o.top_k, "answer candidates per prompt")->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", o.threshold, "entailment threshold")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--preset", o.preset, "column preset of the input corpus")
      ->check(CLI::IsMember({"default", "acled", "gtd"}));
}

void emit(const std::optional<fs::path>& path, const std::string& content, std::ostream& out) {
  if (!path) {
    out << content;
    return;
  }
  if (path->has_parent_path()) fs::create_directories(path->parent_path());
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw error("cannot write " + path->string());
  f << content;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : text::split(s, ',')) {
    const auto t = std::string(text::trim(part));
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) throw CLI::ValidationError("--grid", "'" + t + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--grid", "grid is empty");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(s)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw CLI::ValidationError("--curve", "sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

prompt_template named_template(const std::string& name) {
  if (name == "involves") return involves_template();
  if (name == "people") return people_template();
  throw CLI::ValidationError("--template", "unknown template '" + name + "'");
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// left-aligned first column, right-aligned others
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  std::string out;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    for (std::size_t i = 0; i < rows[ri].size(); ++i) {
      const auto& cell = rows[ri][i];
      const std::string pad(width[i] - cell.size(), ' ');
      out += i == 0 ? cell + pad : "  " + pad + cell;
    }
    out += "\n";
    if (ri == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

std::string mode_title(feature_mode m) {
  switch (m) {
  case feature_mode::bow: return "BoW + LR";
  case feature_mode::random: return "Random Tokens + BoW + LR";
  case feature_mode::pr: return "PR + BoW + LR";
  case feature_mode::prent: return "PR-ENT + BoW + LR";
  }
  return "?";
}

struct split_options {
  std::size_t train = 600;
  std::size_t test = 200;
  std::uint64_t seed = 0;
};

void add_split(CLI::App* cmd, split_options& s) {
  cmd->add_option("--train", s.train, "training records")->check(CLI::PositiveNumber);
  cmd->add_option("--test", s.test, "test records")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", s.seed, "split and sampling seed");
}

//
// subcommands

int cmd_code(const common_options& co, const fs::path& input, const fs::path& codebook_path,
             const std::optional<fs::path>& out_path, std::ostream& out) {
  const auto cb = load_codebook(codebook_path);
  const auto records = read_corpus(input, co.reading());
  const auto models = make_backends(co.backend(), need_fill | need_nli);
  const auto cfg = co.pipeline();
  const auto templates = cb.template_list();
  std::vector<event_description> events;
  for (const auto& r : records) events.emplace_back(r.description);
  const auto results = pr_ent_many(models, events, templates, cfg, co.workers);
  std::string lines;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& [id, o] : results[i])
      if (o.failure) std::rethrow_exception(o.failure);
    lines += coded_json(records[i], apply_codebook(cb, entailed_tokens(results[i]))).dump() + "\n";
  }
  emit(out_path, lines, out);
  return 0;
}

struct bench_options {
  fs::path input;
  split_options split;
  std::string modes = "bow,random,pr,prent";
  std::string task = "all";
  std::string templ = "involves";
  std::string curve;
  std::string format = "table";
  std::optional<fs::path> out;
  std::optional<fs::path> svg;
};

int cmd_bench(const common_options& co, const bench_options& bo, std::ostream& out) {
  const auto records = read_corpus(bo.input, co.reading());
  const auto cfg = co.pipeline();
  const auto models = make_backends(co.backend(), need_fill | need_nli);
  nlohmann::json report;
  std::string table;

  if (bo.task == "all" || bo.task == "classify") {
    std::vector<feature_mode> modes;
    for (const auto& m : text::split(bo.modes, ',')) modes.push_back(parse_feature_mode(text::trim(m)));
    const auto split = stratified_split(records, {bo.split.train, bo.split.test, bo.split.seed});
    std::vector<event_record> both = split.train;
    both.insert(both.end(), split.test.begin(), split.test.end());
    const auto outputs = run_pipeline(models, both, named_template(bo.templ), cfg, co.workers);
    feature_options fo;
    fo.top_k = cfg.top_k;
    fo.threshold = cfg.entail_threshold;
    fo.seed = bo.split.seed;
    std::vector<std::vector<std::string>> rows{{"Model", "Accuracy", "F1 Score"}};
    nlohmann::json j = nlohmann::json::array();
    for (auto m : modes) {
      fo.mode = m;
      const auto r = evaluate_mode(split.train, split.test, fo, &outputs);
      rows.push_back({mode_title(m), fixed(100 * r.accuracy, 1), fixed(100 * r.f1, 1)});
      j.push_back({{"mode", to_string(m)}, {"report", r.to_json()}});
    }
    report["classification"] = {{"train", split.train.size()}, {"test", split.test.size()},
                                {"template", named_template(bo.templ).text}, {"modes", j}};
    table += "Event type classification (" + std::to_string(split.train.size()) + " train / " +
             std::to_string(split.test.size()) + " test)\n" + text_table(rows);

    if (!bo.curve.empty()) {
      const auto sizes = parse_sizes(bo.curve);
      const auto points = learning_curve(split.train, split.test, sizes, modes, fo, &outputs, bo.split.seed);
      nlohmann::json cj = nlohmann::json::array();
      std::vector<std::vector<std::string>> crows{{"Model", "Train size", "Accuracy", "F1 Score"}};
      std::map<feature_mode, series> lines;
      for (const auto& p : points) {
        cj.push_back({{"mode", to_string(p.mode)}, {"size", p.size}, {"accuracy", p.accuracy}, {"f1", p.f1}});
        crows.push_back({mode_title(p.mode), std::to_string(p.size), fixed(100 * p.accuracy, 1),
                         fixed(100 * p.f1, 1)});
        lines[p.mode].name = mode_title(p.mode);
        lines[p.mode].points.emplace_back(static_cast<double>(p.size), p.accuracy);
      }
      report["learning_curve"] = cj;
      table += "\nLearning curve\n" + text_table(crows);
      if (bo.svg) {
        std::vector<series> s;
        for (auto& [m, l] : lines) s.push_back(l);
        emit(*bo.svg, line_chart("Accuracy by training size", "training instances", "accuracy", s), out);
      }
    }
  }

  if (bo.task == "all" || bo.task == "lethal") {
    const auto outputs = run_pipeline(models, records, people_template(), cfg, co.workers);
    const auto lr = lethal_rule_eval(records, outputs, cfg);
    report["lethal"] = lr.to_json();
    std::vector<std::vector<std::string>> rows{{"Model", "F1 Score", "Precision", "Recall"}};
    rows.push_back({"PR-ENT", fixed(100 * lr.prent.f1, 1), fixed(100 * lr.prent.precision, 1),
                    fixed(100 * lr.prent.recall, 1)});
    rows.push_back({"Prompting Only", fixed(100 * lr.pr.f1, 1), fixed(100 * lr.pr.precision, 1),
                    fixed(100 * lr.pr.recall, 1)});
    if (!table.empty()) table += "\n";
    table += "Lethal vs non-lethal (" + std::to_string(lr.events) + " events, \"killed\" in People were [Z].)\n" +
             text_table(rows);
  }
  emit(bo.out, bo.format == "json" ? report.dump(2) + "\n" : table, out);
  return 0;
}

struct sweep_options {
  fs::path input;
  split_options split;
  std::string param;
  std::string grid;
  std::string templ = "involves";
  std::optional<fs::path> out;
  std::optional<fs::path> svg;
};

int cmd_sweep(const common_options& co, const sweep_options& so, std::ostream& out) {
  const auto parameter = parse_sweep_parameter(so.param);
  const auto grid = parse_grid(so.grid);
  auto cfg = co.pipeline();
  if (parameter == sweep_parameter::top_k) {
    for (double g : grid)
      if (g < 0 || g != static_cast<double>(static_cast<std::size_t>(g)))
        throw CLI::ValidationError("--grid", "top_k values must be non-negative integers");
    cfg.top_k = std::max<std::size_t>(1, static_cast<std::size_t>(*std::max_element(grid.begin(), grid.end())));
  } else {
    for (double g : grid)
      if (g < 0 || g > 1) throw CLI::ValidationError("--grid", "thresholds must lie in [0, 1]");
  }
  const auto records = read_corpus(so.input, co.reading());
  const auto split = stratified_split(records, {so.split.train, so.split.test, so.split.seed});
  std::vector<event_record> both = split.train;
  both.insert(both.end(), split.test.begin(), split.test.end());
  const auto models = make_backends(co.backend(), need_fill | need_nli);
  const auto outputs = run_pipeline(models, both, named_template(so.templ), cfg, co.workers);
  feature_options fo;
  fo.mode = feature_mode::prent;
  fo.top_k = co.top_k;
  fo.threshold = co.threshold;
  fo.seed = so.split.seed;
  const auto result = sweep(split.train, split.test, parameter, grid, fo, outputs);
  emit(so.out, result.to_csv(), out);
  if (so.svg) {
    series f1{"F1", {}}, acc{"accuracy", {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      f1.points.emplace_back(grid[i], result.f1[i]);
      acc.points.emplace_back(grid[i], result.accuracy[i]);
    }
    emit(*so.svg, line_chart("PR-ENT sweep", so.param, "score", {f1, acc}), out);
  }
  return 0;
}

struct perturb_options {
  fs::path input;
  std::optional<fs::path> specs;
  std::size_t vocab_size = 100;
  std::string templ = "involves";
  std::string format = "table";
  std::optional<fs::path> out;
};

std::vector<perturbation_spec> default_specs() {
  std::vector<perturbation_spec> out;
  auto add = [&](perturbation_kind k, int i) {
    perturbation_spec s;
    s.kind = k;
    s.intensity = i;
    out.push_back(s);
  };
  add(perturbation_kind::paraphrase, 1);
  add(perturbation_kind::paraphrase, 2);
  add(perturbation_kind::stopword_removal, 1);
  add(perturbation_kind::entity_removal, 1);
  add(perturbation_kind::duplication, 1);
  add(perturbation_kind::duplication, 2);
  return out;
}

int cmd_perturb(const common_options& co, const perturb_options& po, std::ostream& out) {
  std::vector<perturbation_spec> specs = default_specs();
  if (po.specs) {
    std::ifstream in(*po.specs);
    const auto j = nlohmann::json::parse(in);
    if (!j.is_array()) throw parse_error("perturbation config must be a JSON array");
    specs.clear();
    for (const auto& s : j) specs.push_back(perturbation_spec::from_json(s));
  }
  const auto records = read_corpus(po.input, co.reading());
  std::vector<event_description> corpus;
  for (const auto& r : records) corpus.emplace_back(r.description);
  const auto models = make_backends(co.backend(), need_fill | need_nli);
  const auto cfg = co.pipeline();
  const auto t = named_template(po.templ);
  const auto vocab = build_fixed_vocab(models.fill_model(), corpus, t, po.vocab_size, cfg);
  const auto report = run_robustness(models, corpus, t, specs, vocab, cfg);
  emit(po.out, po.format == "json" ? report.to_json().dump(2) + "\n" : report.to_table(), out);
  return 0;
}

struct timeseries_options {
  fs::path input;
  std::string type;
  std::optional<std::string> region;
  std::optional<fs::path> codebook;
  std::optional<fs::path> out;
  std::optional<fs::path> svg;
};

int cmd_timeseries(const common_options& co, const timeseries_options& to, std::ostream& out) {
  const auto records = read_corpus(to.input, co.reading());
  std::vector<coded_record> coded;
  std::string source = "ground_truth";
  if (to.codebook) {
    const auto cb = load_codebook(*to.codebook);
    const auto models = make_backends(co.backend(), need_fill | need_nli);
    const auto cfg = co.pipeline();
    for (const auto& r : records) coded.push_back({r, code_event(models, event_description(r.description), cb, cfg)});
    source = "prent";
  } else {
    coded = ground_truth_coding(records);
  }
  const auto ts = monthly_time_series(coded, to.type, to.region, source);
  emit(to.out, ts.to_csv(), out);
  if (to.svg) {
    series s{to.type, {}};
    for (std::size_t i = 0; i < ts.points.size(); ++i)
      s.points.emplace_back(static_cast<double>(i), static_cast<double>(ts.points[i].count));
    const auto first = ts.points.empty() ? std::string() : ts.points.front().period;
    emit(*to.svg, line_chart(to.type + (to.region ? " in " + *to.region : ""), "months since " + first, "events", {s}),
         out);
  }
  return 0;
}

int cmd_stats(const common_options& co, const fs::path& input, const std::optional<fs::path>& out_path,
              std::ostream& out) {
  const auto records = read_corpus(input, co.reading());
  auto j = corpus_stats(records).to_json();
  j["records"] = records.size();
  j["labels"] = label_counts(records);
  emit(out_path, j.dump(2) + "\n", out);
  return 0;
}

struct roles_options {
  fs::path input;
  double min_confidence = 0.1;
  std::string actions;
  std::optional<fs::path> out;
};

int cmd_roles(const common_options& co, const roles_options& ro, std::ostream& out, std::ostream& err) {
  const auto records = read_corpus(ro.input, co.reading());
  const bool given = !ro.actions.empty();
  const auto models = make_backends(co.backend(), given ? need_qa : need_all);
  const auto cfg = co.pipeline();
  const std::vector<prompt_template> templates{people_template()};
  role_config rc{ro.min_confidence};
  std::string lines;
  for (const auto& r : records) {
    const event_description e(r.description);
    std::vector<std::string> actions;
    if (given) {
      for (const auto& a : text::split(ro.actions, ',')) actions.emplace_back(text::trim(a));
    } else {
      const auto result = pr_ent(models, e, templates, cfg);
      const auto& o = result.at(people_template().id);
      if (o.failure) std::rethrow_exception(o.failure);
      actions = o.entailed->tokens();
    }
    for (const auto& a : actions) {
      const auto rr = extract_roles(models.qa_model(), e, a, rc);
      for (const auto& w : rr.warnings) err << "warning: " << r.id << ": " << w << "\n";
      lines += to_json(rr, r.id).dump() + "\n";
    }
  }
  emit(ro.out, lines, out);
  return 0;
}

struct serve_options {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<fs::path> data_dir;
  std::vector<fs::path> codebooks;
  std::vector<std::string> corpora;
};

int cmd_serve(const common_options& co, const serve_options& so, std::ostream& out, std::ostream& err) {
  service_options opts;
  opts.data_dir = so.data_dir;
  opts.codebook_dirs = so.codebooks;
  if (opts.codebook_dirs.empty()) opts.codebook_dirs.push_back(fs::path(PRENT_DEFAULT_DATA_DIR) / "codebooks");
  for (const auto& c : so.corpora) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--corpus", "expected name=path, got '" + c + "'");
    opts.corpora[c.substr(0, eq)] = c.substr(eq + 1);
  }
  opts.pipeline = co.pipeline();
  opts.default_templates = {involves_template(), people_template()};
  const auto cfg = co.backend();
  service svc(opts, [cfg] { return make_backends(cfg, need_all); });
  out << "listening on http://" << so.host << ":" << so.port << std::endl;
  if (!serve_http(svc, so.host, so.port)) {
    err << "error: cannot listen on " << so.host << ":" << so.port << "\n";
    return 1;
  }
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event coding with prompting and textual entailment", "prent"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "prent 0.1.0");

  common_options co;

  fs::path input, codebook_path;
  std::optional<fs::path> out_path;
  auto* code = app.add_subcommand("code", "code a corpus with a codebook, one JSON line per event");
  add_common(code, co);
  code->add_option("--input", input, "corpus (CSV/TSV)")->required()->check(CLI::ExistingFile);
  code->add_option("--codebook", codebook_path, "codebook JSON")->required()->check(CLI::ExistingFile);
  code->add_option("--out", out_path, "output file (default stdout)");

  bench_options bo;
  auto* bench = app.add_subcommand("bench", "classification and lethal-event benchmarks");
  add_common(bench, co);
  bench->add_option("--input", bo.input, "labeled corpus")->required()->check(CLI::ExistingFile);
  add_split(bench, bo.split);
  bench->add_option("--modes", bo.modes, "feature modes, comma separated");
  bench->add_option("--task", bo.task, "which benchmark")->check(CLI::IsMember({"all", "classify", "lethal"}));
  bench->add_option("--template", bo.templ, "template for the classifier features")
      ->check(CLI::IsMember({"involves", "people"}));
  bench->add_option("--curve", bo.curve, "training sizes for a learning curve, comma separated");
  bench->add_option("--format", bo.format, "output format")->check(CLI::IsMember({"table", "json"}));
  bench->add_option("--out", bo.out, "output file (default stdout)");
  bench->add_option("--svg", bo.svg, "write the learning curve as SVG");

  sweep_options so;
  auto* sw = app.add_subcommand("sweep", "F1 of PR-ENT features across top_k or threshold values (CSV)");
  add_common(sw, co);
  sw->add_option("--input", so.input, "labeled corpus")->required()->check(CLI::ExistingFile);
  add_split(sw, so.split);
  sw->add_option("--param", so.param, "swept parameter")->required()->check(CLI::IsMember({"top_k", "threshold"}));
  sw->add_option("--grid", so.grid, "values, comma separated")->required();
  sw->add_option("--template", so.templ, "template")->check(CLI::IsMember({"involves", "people"}));
  sw->add_option("--out", so.out, "output file (default stdout)");
  sw->add_option("--svg", so.svg, "write the sweep as SVG");

  perturb_options po;
  auto* pert = app.add_subcommand("perturb", "robustness of PR and PR-ENT under input perturbations");
  add_common(pert, co);
  pert->add_option("--input", po.input, "corpus")->required()->check(CLI::ExistingFile);
  pert->add_option("--specs", po.specs, "perturbation config (JSON array)")->check(CLI::ExistingFile);
  pert->add_option("--vocab-size", po.vocab_size, "fixed answer vocabulary size")->check(CLI::PositiveNumber);
  pert->add_option("--template", po.templ, "template")->check(CLI::IsMember({"involves", "people"}));
  pert->add_option("--format", po.format, "output format")->check(CLI::IsMember({"table", "json"}));
  pert->add_option("--out", po.out, "output file (default stdout)");

  timeseries_options to;
  auto* ts = app.add_subcommand("timeseries", "monthly event counts (CSV)");
  add_common(ts, co);
  ts->add_option("--input", to.input, "corpus")->required()->check(CLI::ExistingFile);
  ts->add_option("--type", to.type, "event type")->required();
  ts->add_option("--region", to.region, "region or country filter");
  ts->add_option("--codebook", to.codebook, "code with this codebook instead of the labels")
      ->check(CLI::ExistingFile);
  ts->add_option("--out", to.out, "output file (default stdout)");
  ts->add_option("--svg", to.svg, "write the series as SVG");

  fs::path stats_input;
  std::optional<fs::path> stats_out;
  auto* st = app.add_subcommand("stats", "corpus statistics (JSON)");
  add_common(st, co);
  st->add_option("--input", stats_input, "corpus")->required()->check(CLI::ExistingFile);
  st->add_option("--out", stats_out, "output file (default stdout)");

  roles_options ro;
  auto* rl = app.add_subcommand("roles", "actor and target extraction, one JSON line per action");
  add_common(rl, co);
  rl->add_option("--input", ro.input, "corpus")->required()->check(CLI::ExistingFile);
  rl->add_option("--min-confidence", ro.min_confidence, "QA confidence floor")->check(CLI::Range(0.0, 1.0));
  rl->add_option("--actions", ro.actions, "actions to ask about, comma separated (default: PR-ENT on People were [Z].)");
  rl->add_option("--out", ro.out, "output file (default stdout)");

  serve_options sv;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  add_common(serve, co);
  serve->add_option("--host", sv.host, "bind address");
  serve->add_option("--port", sv.port, "port")->check(CLI::Range(1, 65535));
  serve->add_option("--data-dir", sv.data_dir, "where codebooks and sessions are stored");
  serve->add_option("--codebooks", sv.codebooks, "read-only codebook directories")->check(CLI::ExistingDirectory);
  serve->add_option("--corpus", sv.corpora, "corpus available to /code and sessions, as name=path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*code) return cmd_code(co, input, codebook_path, out_path, out);
    if (*bench) return cmd_bench(co, bo, out);
    if (*sw) return cmd_sweep(co, so, out);
    if (*pert) return cmd_perturb(co, po, out);
    if (*ts) return cmd_timeseries(co, to, out);
    if (*st) return cmd_stats(co, stats_input, stats_out, out);
    if (*rl) return cmd_roles(co, ro, out, err);
    if (*serve) return cmd_serve(co, sv, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

} // namespace prent::cli
