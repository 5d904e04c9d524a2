#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace prent {

struct calendar_date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const calendar_date&, const calendar_date&) = default;

  /// accepts "YYYY-MM-DD", "YYYY/MM/DD" and ACLED's "DD Month YYYY"
  static std::optional<calendar_date> parse(std::string_view s);
  std::string to_string() const;
  std::string month_key() const; ///< "YYYY-MM"
};

struct event_record {
  std::string id;
  std::string description;
  std::optional<std::string> label;
  std::optional<int> fatalities;
  std::optional<calendar_date> date;
  std::optional<std::string> country;
  std::optional<std::string> region;

  friend bool operator==(const event_record&, const event_record&) = default;
};

/// Header names for each field; empty optional fields are not read.
struct column_mapping {
  std::string id = "id";
  std::string description = "description";
  std::string label = "label";
  std::string fatalities = "fatalities";
  std::string date = "date";
  std::string country = "country";
  std::string region = "region";
  /// year/month/day columns used when `date` is absent from the header
  std::optional<std::array<std::string, 3>> date_parts;

  /// "acled", "gtd" or "default"
  static column_mapping preset(std::string_view name);
  static column_mapping from_json(const nlohmann::json& j);
  static column_mapping from_json(const nlohmann::json& j, column_mapping base);
};

struct read_options {
  column_mapping columns;
  /// 0 picks ',' or '\t' from the file extension and the header line
  char delimiter = 0;
  bool clean = true;
};

struct read_report {
  std::size_t rows = 0;
  std::size_t dropped_empty = 0;
};

/// Strips annotator notes (bracket groups containing a colon) and collapses
/// whitespace. Idempotent; an empty result marks a record to drop.
std::string clean_description(std::string_view raw);

/// RFC 4180 rows; quoted fields may contain delimiters, quotes and newlines.
std::vector<std::vector<std::string>> parse_delimited(std::string_view data, char delimiter);

std::vector<event_record> parse_corpus(std::string_view data, const read_options& opts,
                                       read_report* report = nullptr);
std::vector<event_record> read_corpus(const std::filesystem::path& path, const read_options& opts = {},
                                      read_report* report = nullptr);

/// CSV with the default column names
void write_corpus(std::ostream& out, std::span<const event_record> records);
void write_corpus(const std::filesystem::path& path, std::span<const event_record> records);

const event_record* find_record(std::span<const event_record> records, std::string_view id);

//
// splits

struct split_spec {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

struct split_result {
  std::vector<event_record> train;
  std::vector<event_record> test;
};

/// Largest-remainder apportionment of n over classes weighted by counts.
/// Every class with a positive quota that the counts allow receives at least one.
std::map<std::string, std::size_t> proportional_allocation(const std::map<std::string, std::size_t>& counts,
                                                           std::size_t n);

/// Class-stratified train/test split, deterministic under the seed; both
/// halves keep input order.
split_result stratified_split(std::span<const event_record> records, const split_spec& spec);

std::map<std::string, std::size_t> label_counts(std::span<const event_record> records);

//
// coded series and statistics

struct coded_record {
  event_record record;
  std::set<std::string> types;
};

/// ground-truth coding: each record coded with its own label
std::vector<coded_record> ground_truth_coding(std::span<const event_record> records);

struct time_point {
  std::string period; ///< "YYYY-MM"
  std::size_t count = 0;

  friend bool operator==(const time_point&, const time_point&) = default;
};

struct time_series {
  std::string event_type;
  std::optional<std::string> region;
  std::string source; ///< "ground_truth" or "prent"
  std::vector<time_point> points;
  std::size_t undated = 0; ///< matching records without a date

  std::size_t total() const;
  std::string to_csv() const;
};

/// Monthly counts of records coded with event_type, optionally restricted to a
/// region (matched against region or country). The range spans the dated
/// records that pass the region filter, zero months included.
time_series monthly_time_series(std::span<const coded_record> coded, const std::string& event_type,
                                const std::optional<std::string>& region, std::string source);

struct corpus_statistics {
  std::map<std::size_t, std::size_t> lengths;   ///< tokens per description -> records
  std::map<std::string, std::size_t> unigrams;  ///< lowercased whitespace tokens
  std::size_t total_tokens = 0;

  nlohmann::json to_json() const;
};

corpus_statistics corpus_stats(std::span<const event_record> records);

/// {event_id, description, types:[...]}
nlohmann::json coded_json(const event_record& record, const std::set<std::string>& types);

} // namespace prent
