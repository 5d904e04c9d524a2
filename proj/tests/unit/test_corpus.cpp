#include <doctest.h>

#include "split_properties.hpp"
#include "prent/corpus.hpp"
#include "prent/error.hpp"
#include "prent/random.hpp"

#include <filesystem>
#include <sstream>

using namespace prent;

namespace {

const std::filesystem::path synthetic = std::filesystem::path(PRENT_DATA_DIR) / "synthetic";

event_record dated(std::string id, std::string label, calendar_date d, std::string region = "North") {
  event_record r;
  r.id = std::move(id);
  r.description = "Something happened.";
  r.label = std::move(label);
  r.date = d;
  r.region = std::move(region);
  return r;
}

} // namespace

TEST_CASE("annotator notes are removed, placeholders kept") {
  CHECK(clean_description("Protest in town. [size: no report]") == "Protest in town.");
  CHECK(clean_description("  ") == "");
  CHECK(clean_description("Battle near [LOC].") == "Battle near [LOC].");
  CHECK(clean_description("[note: local media] Riots in [LOC]  [source: x]") == "Riots in [LOC]");
  CHECK(clean_description("Outer [a [b: c] d] text") == "Outer [a d] text");
  CHECK(clean_description("Unclosed [note: bracket") == "Unclosed [note: bracket");
}

TEST_CASE("cleaning is idempotent") {
  random::engine rng(3);
  const std::vector<std::string> parts{"a", " ", "[", "]", ":", "note", "\t", "[LOC]", "x:y", "\n", "b."};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const auto n = random::uniform_below(rng, 14);
    for (std::uint64_t k = 0; k < n; ++k) s += parts[random::uniform_below(rng, parts.size())];
    const auto once = clean_description(s);
    CAPTURE(s);
    CHECK(clean_description(once) == once);
  }
}

TEST_CASE("dates") {
  CHECK(calendar_date::parse("2020-05-03") == calendar_date{2020, 5, 3});
  CHECK(calendar_date::parse("2020/05/03") == calendar_date{2020, 5, 3});
  CHECK(calendar_date::parse("03 May 2020") == calendar_date{2020, 5, 3});
  CHECK_FALSE(calendar_date::parse("2020-02-30"));
  CHECK_FALSE(calendar_date::parse("yesterday"));
  CHECK(calendar_date{2020, 5, 3}.month_key() == "2020-05");
}

TEST_CASE("delimited parsing follows RFC 4180") {
  const auto rows = parse_delimited("id,description\n1,\"a, \"\"quoted\"\"\nline\"\r\n2,plain\n", ',');
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][1] == "a, \"quoted\"\nline");
  CHECK(rows[2] == std::vector<std::string>{"2", "plain"});
  CHECK_THROWS_AS(parse_delimited("id\n\"open", ','), parse_error);
}

TEST_CASE("corpus parsing") {
  read_report rep;
  const auto recs = parse_corpus(
      "id\tdescription\tlabel\tfatalities\tdate\n"
      "a\tRiot in town. [size: no report]\tRiots\t0\t2020-01-04\n"
      "b\t[note: only a note]\tRiots\t\t\n"
      "c\tTwo killed.\tBattles\t2\t\n",
      {}, &rep);
  CHECK(rep.rows == 3);
  CHECK(rep.dropped_empty == 1);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].description == "Riot in town.");
  CHECK(recs[0].fatalities == 0);
  CHECK(recs[0].date == calendar_date{2020, 1, 4});
  CHECK(recs[1].fatalities == 2);
  CHECK_FALSE(recs[1].date);

  CHECK_THROWS_AS(parse_corpus("id,description\na,x\na,y\n", {}), parse_error);
  CHECK_THROWS_AS(parse_corpus("id,text\na,x\n", {}), parse_error);
  CHECK_THROWS_AS(parse_corpus("id,description,fatalities\na,x,many\n", {}), parse_error);
}

TEST_CASE("column presets") {
  read_options gtd;
  gtd.columns = column_mapping::preset("gtd");
  const auto recs = parse_corpus("eventid,summary,attacktype1_txt,nkill,iyear,imonth,iday\n"
                                 "1,Bomb exploded.,Bombing,3,2015,7,0\n",
                                 gtd);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].date == calendar_date{2015, 7, 1});
  CHECK(recs[0].fatalities == 3);
  CHECK(column_mapping::preset("acled").description == "notes");
  CHECK_THROWS(column_mapping::preset("nope"));
  const auto m = column_mapping::from_json(nlohmann::json{{"preset", "acled"}, {"description", "text"}});
  CHECK(m.description == "text");
  CHECK(m.id == "event_id_cnty");
}

TEST_CASE("write and read back") {
  const auto recs = read_corpus(synthetic / "events.csv");
  std::ostringstream out;
  write_corpus(out, recs);
  CHECK(parse_corpus(out.str(), {}) == recs);
  REQUIRE(find_record(recs, recs[5].id));
  CHECK(find_record(recs, recs[5].id)->description == recs[5].description);
  CHECK(find_record(recs, "missing") == nullptr);
}

TEST_CASE("largest-remainder allocation") {
  CHECK(proportional_allocation({{"A", 90}, {"B", 10}}, 90) == std::map<std::string, std::size_t>{{"A", 81}, {"B", 9}});
  CHECK(proportional_allocation({{"A", 1}, {"B", 1}, {"C", 1}}, 2).size() == 3);
  // every class with a positive quota gets a seat
  const auto a = proportional_allocation({{"big", 997}, {"small", 3}}, 100);
  CHECK(a.at("small") == 1);
  CHECK(a.at("big") == 99);
  CHECK_THROWS_AS(proportional_allocation({{"A", 2}}, 3), insufficient_data);
}

TEST_CASE("90/10 corpus split into 90 and 10") {
  const auto recs = testing::labeled_records({{"A", 90}, {"B", 10}}, 1);
  const auto s = stratified_split(recs, {90, 10, 7});
  const auto counts = label_counts(s.train);
  // exact shares: 90 * 0.9 = 81 of A in train, 9 of A in test
  CHECK(counts.at("A") >= 80);
  CHECK(counts.at("A") <= 82);
  CHECK(label_counts(s.test).at("A") == 9);
  const auto check = testing::check_split(recs, 90, 10, 7);
  CHECK(check.within_one());
  CHECK(check.sizes_exact);
  CHECK(check.disjoint);
}

TEST_CASE("4000 records split 3000/1000") {
  const auto recs = testing::labeled_records(
      {{"Battles", 1400}, {"Protests", 1100}, {"Riots", 700}, {"Explosions", 500}, {"Strategic", 300}}, 2);
  const auto check = testing::check_split(recs, 3000, 1000, 42);
  CHECK(check.sizes_exact);
  CHECK(check.within_one());
  CHECK(check.reproducible);
  CHECK(check.order_kept);
}

TEST_CASE("split properties on random corpora") {
  random::engine rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::pair<std::string, std::size_t>> classes;
    const auto k = 1 + random::uniform_below(rng, 6);
    std::size_t total = 0;
    for (std::uint64_t c = 0; c < k; ++c) {
      const auto n = 1 + random::uniform_below(rng, 80);
      classes.emplace_back("c" + std::to_string(c), n);
      total += n;
    }
    if (total < 2) continue;
    const auto n_train = 1 + random::uniform_below(rng, total - 1);
    const auto n_test = 1 + random::uniform_below(rng, total - n_train);
    const auto recs = testing::labeled_records(classes, static_cast<std::uint64_t>(i));
    const auto check = testing::check_split(recs, n_train, n_test, static_cast<std::uint64_t>(i) * 31);
    CAPTURE(i);
    CHECK(check.sizes_exact);
    CHECK(check.disjoint);
    CHECK(check.reproducible);
    CHECK(check.order_kept);
    CHECK(check.within_one());
  }
}

TEST_CASE("single-class corpus and bad requests") {
  const auto recs = testing::labeled_records({{"Only", 20}}, 3);
  const auto s = stratified_split(recs, {12, 8, 0});
  CHECK(s.train.size() == 12);
  CHECK(s.test.size() == 8);
  CHECK_THROWS_AS(stratified_split(recs, {15, 8, 0}), insufficient_data);
  CHECK_THROWS_AS(stratified_split(recs, {0, 8, 0}), insufficient_data);
  auto unlabeled = recs;
  unlabeled[3].label.reset();
  CHECK_THROWS_AS(stratified_split(unlabeled, {5, 5, 0}), insufficient_data);
}

TEST_CASE("monthly series") {
  std::vector<event_record> recs{dated("1", "Kidnapping", {2020, 5, 1}), dated("2", "Kidnapping", {2020, 5, 9}),
                                 dated("3", "Kidnapping", {2020, 5, 30}), dated("4", "Riots", {2020, 3, 2}),
                                 dated("5", "Kidnapping", {2020, 8, 2}, "South")};
  auto undated = dated("6", "Kidnapping", {2020, 1, 1});
  undated.date.reset();
  recs.push_back(undated);
  const auto coded = ground_truth_coding(recs);
  const auto ts = monthly_time_series(coded, "Kidnapping", std::nullopt, "ground_truth");
  CHECK(ts.points == std::vector<time_point>{{"2020-03", 0}, {"2020-04", 0}, {"2020-05", 3},
                                             {"2020-06", 0}, {"2020-07", 0}, {"2020-08", 1}});
  CHECK(ts.undated == 1);
  CHECK(ts.total() + ts.undated == 5);
  CHECK(ts.to_csv().rfind("period,count\n2020-03,0\n", 0) == 0);

  const auto north = monthly_time_series(coded, "Kidnapping", std::string("North"), "ground_truth");
  CHECK(north.points.back() == time_point{"2020-05", 3});
  CHECK(monthly_time_series({}, "Kidnapping", std::nullopt, "prent").points.empty());
}

TEST_CASE("series conserve counts on the bundled corpus") {
  const auto recs = read_corpus(synthetic / "events.csv");
  const auto coded = ground_truth_coding(recs);
  std::size_t sum = 0;
  for (const auto& [label, n] : label_counts(recs)) {
    const auto ts = monthly_time_series(coded, label, std::nullopt, "ground_truth");
    CHECK(ts.total() + ts.undated == n);
    for (std::size_t i = 1; i < ts.points.size(); ++i) CHECK(ts.points[i - 1].period < ts.points[i].period);
    sum += ts.total() + ts.undated;
  }
  CHECK(sum == recs.size());
}

TEST_CASE("corpus statistics") {
  std::vector<event_record> recs(2);
  recs[0].description = "a b";
  recs[1].description = "A";
  const auto s = corpus_stats(recs);
  CHECK(s.unigrams == std::map<std::string, std::size_t>{{"a", 2}, {"b", 1}});
  CHECK(s.lengths == std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}});
  CHECK(corpus_stats({}).unigrams.empty());
  CHECK(corpus_stats({}).lengths.empty());

  const auto big = corpus_stats(read_corpus(synthetic / "events.csv"));
  std::size_t mass = 0, by_length = 0;
  for (const auto& [t, n] : big.unigrams) mass += n;
  for (const auto& [len, n] : big.lengths) by_length += len * n;
  CHECK(mass == big.total_tokens);
  CHECK(by_length == big.total_tokens);
  CHECK(big.to_json()["total_tokens"] == big.total_tokens);
}
