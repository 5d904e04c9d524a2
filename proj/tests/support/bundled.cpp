#include "bundled.hpp"

namespace prent::testing {

std::filesystem::path data_dir() { return PRENT_DATA_DIR; }

std::filesystem::path mock_fixture_path() { return data_dir() / "synthetic" / "mock_fixtures.json"; }

const backends& bundled_models() {
  static const backends models =
      make_mock_backends(std::make_shared<mock_fixtures>(mock_fixtures::load(mock_fixture_path())));
  return models;
}

const bundled_benchmark& bundled() {
  static const bundled_benchmark data = [] {
    bundled_benchmark b;
    b.records = read_corpus(data_dir() / "synthetic" / "events.csv");
    b.split = stratified_split(b.records, {600, 200, 0});
    b.split_records = b.split.train;
    b.split_records.insert(b.split_records.end(), b.split.test.begin(), b.split.test.end());
    b.models = bundled_models();
    pipeline_config wide;
    wide.top_k = 40;
    b.involves = run_pipeline(b.models, b.split_records, involves_template(), wide);
    b.people = run_pipeline(b.models, b.records, people_template(), pipeline_config{});
    return b;
  }();
  return data;
}

} // namespace prent::testing
