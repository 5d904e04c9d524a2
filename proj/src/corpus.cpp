#include "prent/corpus.hpp"

#include "prent/error.hpp"
#include "prent/random.hpp"
#include "prent/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace prent {

namespace {

int to_int(std::string_view s, int fallback = -1) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && p == end ? v : fallback;
}

bool valid_date(int y, int m, int d) {
  static constexpr int days[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return y > 0 && m >= 1 && m <= 12 && d >= 1 && d <= days[m - 1];
}

} // namespace

std::optional<calendar_date> calendar_date::parse(std::string_view raw) {
  const auto s = text::trim(raw);
  for (char sep : {'-', '/'}) {
    const auto parts = text::split(s, sep);
    if (parts.size() == 3 && parts[0].size() == 4) {
      const int y = to_int(parts[0]), m = to_int(parts[1]), d = to_int(parts[2]);
      if (valid_date(y, m, d)) return calendar_date{y, m, d};
      return std::nullopt;
    }
  }
  const auto words = text::split_whitespace(s);
  if (words.size() == 3) {
    static const char* names[] = {"january", "february", "march",     "april",   "may",      "june",
                                  "july",    "august",   "september", "october", "november", "december"};
    const auto month = text::to_lower_ascii(words[1]);
    for (int m = 0; m < 12; ++m) {
      const std::string full = names[m];
      if (month == full || (month.size() >= 3 && full.compare(0, month.size(), month) == 0)) {
        const int d = to_int(words[0]), y = to_int(words[2]);
        if (valid_date(y, m + 1, d)) return calendar_date{y, m + 1, d};
      }
    }
  }
  return std::nullopt;
}

std::string calendar_date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::string calendar_date::month_key() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

column_mapping column_mapping::preset(std::string_view name) {
  column_mapping m;
  if (name == "acled") {
    m.id = "event_id_cnty";
    m.description = "notes";
    m.label = "event_type";
    m.fatalities = "fatalities";
    m.date = "event_date";
    m.country = "country";
    m.region = "admin1";
  } else if (name == "gtd") {
    m.id = "eventid";
    m.description = "summary";
    m.label = "attacktype1_txt";
    m.fatalities = "nkill";
    m.date = "";
    m.date_parts = std::array<std::string, 3>{"iyear", "imonth", "iday"};
    m.country = "country_txt";
    m.region = "region_txt";
  } else if (name != "default") {
    throw std::invalid_argument("unknown column preset '" + std::string(name) + "'");
  }
  return m;
}

column_mapping column_mapping::from_json(const nlohmann::json& j) { return from_json(j, column_mapping{}); }

column_mapping column_mapping::from_json(const nlohmann::json& j, column_mapping m) {
  if (!j.is_object()) throw schema_violation("$", "column mapping must be an object");
  if (j.contains("preset")) m = preset(j["preset"].get<std::string>());
  auto field = [&](const char* key, std::string& out) {
    if (j.contains(key)) {
      if (!j[key].is_string()) throw schema_violation(std::string("$.") + key, "expected a column name");
      out = j[key].get<std::string>();
    }
  };
  field("id", m.id);
  field("description", m.description);
  field("label", m.label);
  field("fatalities", m.fatalities);
  field("date", m.date);
  field("country", m.country);
  field("region", m.region);
  return m;
}

std::string clean_description(std::string_view raw) {
  // remove innermost bracket groups holding a colon until none remain
  std::string s(raw);
  for (bool changed = true; changed;) {
    changed = false;
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] == '[') {
        const auto close = s.find_first_of("[]", i + 1);
        if (close != std::string::npos && s[close] == ']') {
          const auto inner = std::string_view(s).substr(i + 1, close - i - 1);
          if (inner.find(':') != std::string_view::npos) {
            out += ' ';
            i = close + 1;
            changed = true;
            continue;
          }
        }
      }
      out += s[i++];
    }
    s = std::move(out);
  }
  return text::collapse_whitespace(s);
}

std::vector<std::vector<std::string>> parse_delimited(std::string_view data, char delim) {
  if (data.size() >= 3 && data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw parse_error("unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<event_record> parse_corpus(std::string_view data, const read_options& opts,
                                       read_report* report) {
  char delim = opts.delimiter;
  if (delim == 0) {
    const auto nl = data.find('\n');
    const auto header = data.substr(0, nl);
    delim = std::count(header.begin(), header.end(), '\t') > std::count(header.begin(), header.end(), ',') ? '\t' : ',';
  }
  const auto rows = parse_delimited(data, delim);
  if (rows.empty()) throw parse_error("corpus has no header row");
  const auto& header = rows.front();
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (text::trim(header[i]) == name) return i;
    return std::nullopt;
  };
  const auto& m = opts.columns;
  const auto id_col = column(m.id);
  const auto desc_col = column(m.description);
  if (!id_col) throw parse_error("corpus lacks the id column '" + m.id + "'");
  if (!desc_col) throw parse_error("corpus lacks the description column '" + m.description + "'");
  const auto label_col = column(m.label);
  const auto fatal_col = column(m.fatalities);
  const auto date_col = column(m.date);
  const auto country_col = column(m.country);
  const auto region_col = column(m.region);
  std::optional<std::array<std::size_t, 3>> part_cols;
  if (!date_col && m.date_parts) {
    auto y = column((*m.date_parts)[0]), mo = column((*m.date_parts)[1]), d = column((*m.date_parts)[2]);
    if (y && mo && d) part_cols = std::array<std::size_t, 3>{*y, *mo, *d};
  }

  read_report rep;
  std::vector<event_record> out;
  std::set<std::string> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::optional<std::size_t> c) -> std::optional<std::string> {
      if (!c || *c >= row.size()) return std::nullopt;
      auto v = text::trim(row[*c]);
      if (v.empty()) return std::nullopt;
      return v;
    };
    ++rep.rows;
    event_record rec;
    rec.id = cell(id_col).value_or("");
    if (rec.id.empty()) throw parse_error("row " + std::to_string(r + 1) + " has an empty id");
    const auto raw = row.size() > *desc_col ? row[*desc_col] : std::string();
    rec.description = opts.clean ? clean_description(raw) : text::collapse_whitespace(raw);
    if (rec.description.empty()) {
      ++rep.dropped_empty;
      continue;
    }
    if (!ids.insert(rec.id).second) throw parse_error("duplicate event id '" + rec.id + "'");
    rec.label = cell(label_col);
    if (auto f = cell(fatal_col)) {
      char* end = nullptr;
      const double v = std::strtod(f->c_str(), &end);
      if (end == f->c_str() || *end != '\0' || v < 0 || !std::isfinite(v))
        throw parse_error("row " + std::to_string(r + 1) + ": invalid fatality count '" + *f + "'");
      rec.fatalities = static_cast<int>(std::lround(v));
    }
    if (auto d = cell(date_col)) {
      rec.date = calendar_date::parse(*d);
      if (!rec.date) throw parse_error("row " + std::to_string(r + 1) + ": unreadable date '" + *d + "'");
    } else if (part_cols) {
      const int y = to_int(cell((*part_cols)[0]).value_or(""));
      const int mo = to_int(cell((*part_cols)[1]).value_or(""));
      const int d = std::max(1, to_int(cell((*part_cols)[2]).value_or("1"), 1));
      if (valid_date(y, mo, d)) rec.date = calendar_date{y, mo, d};
    }
    rec.country = cell(country_col);
    rec.region = cell(region_col);
    out.push_back(std::move(rec));
  }
  if (report) *report = rep;
  return out;
}

std::vector<event_record> read_corpus(const std::filesystem::path& path, const read_options& opts,
                                      read_report* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open corpus " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto o = opts;
  if (o.delimiter == 0 && (path.extension() == ".tsv" || path.extension() == ".tab")) o.delimiter = '\t';
  return parse_corpus(buf.str(), o, report);
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  return "\"" + text::replace_all(s, "\"", "\"\"") + "\"";
}

} // namespace

void write_corpus(std::ostream& out, std::span<const event_record> records) {
  out << "id,description,label,fatalities,date,country,region\n";
  for (const auto& r : records) {
    out << csv_field(r.id) << ',' << csv_field(r.description) << ',' << csv_field(r.label.value_or(""))
        << ',' << (r.fatalities ? std::to_string(*r.fatalities) : "") << ','
        << (r.date ? r.date->to_string() : "") << ',' << csv_field(r.country.value_or("")) << ','
        << csv_field(r.region.value_or("")) << '\n';
  }
}

void write_corpus(const std::filesystem::path& path, std::span<const event_record> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write " + path.string());
  write_corpus(out, records);
}

const event_record* find_record(std::span<const event_record> records, std::string_view id) {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

//
// splits

std::map<std::string, std::size_t> label_counts(std::span<const event_record> records) {
  std::map<std::string, std::size_t> out;
  for (const auto& r : records)
    if (r.label) ++out[*r.label];
  return out;
}

namespace {

using class_counts = std::map<std::string, std::size_t>;

class_counts apportion(const class_counts& counts, std::size_t n, bool keep_present) {
  std::size_t total = 0;
  for (const auto& [c, k] : counts) total += k;
  if (n > total) throw insufficient_data("cannot allocate " + std::to_string(n) + " of " + std::to_string(total));
  class_counts alloc;
  if (total == 0) return alloc;

  struct share {
    std::string cls;
    double quota;
    std::size_t base;
  };
  std::vector<share> shares;
  std::size_t assigned = 0;
  for (const auto& [c, k] : counts) {
    const double q = static_cast<double>(n) * static_cast<double>(k) / static_cast<double>(total);
    const auto base = std::min<std::size_t>(static_cast<std::size_t>(std::floor(q)), k);
    shares.push_back({c, q, base});
    assigned += base;
  }
  // hand out the remaining seats by largest fractional part, ties by class name
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shares[a].quota - static_cast<double>(shares[a].base) >
           shares[b].quota - static_cast<double>(shares[b].base);
  });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % order.size()) {
    auto& s = shares[order[i]];
    if (s.base < counts.at(s.cls)) {
      ++s.base;
      ++assigned;
    }
  }
  // classes whose quota is positive but rounded to zero take a seat from the
  // class rounded up the most
  for (auto& s : shares) {
    if (!keep_present || s.base > 0 || s.quota <= 0.0) continue;
    share* donor = nullptr;
    for (auto& d : shares) {
      if (d.base < 2) continue;
      if (!donor || d.base - d.quota > donor->base - donor->quota) donor = &d;
    }
    if (donor && donor->base - donor->quota > 0.0) {
      --donor->base;
      s.base = 1;
    }
  }
  for (const auto& s : shares) alloc[s.cls] = s.base;
  return alloc;
}

struct seat_plan {
  class_counts train, test;
};

/// Test seats first; train seats follow corpus proportions within what test left.
seat_plan split_seats(const class_counts& counts, const split_spec& spec, bool test_presence, bool train_presence) {
  seat_plan plan;
  plan.test = apportion(counts, spec.n_test, test_presence);
  auto remaining = counts;
  for (auto& [c, k] : remaining) k -= plan.test.at(c);
  plan.train = apportion(counts, spec.n_train, train_presence);
  std::size_t deficit = 0;
  for (auto& [c, k] : plan.train) {
    if (k > remaining[c]) {
      deficit += k - remaining[c];
      k = remaining[c];
    }
  }
  // displaced seats go to the classes furthest below their train quota
  std::size_t total = 0;
  for (const auto& [c, k] : counts) total += k;
  for (; deficit > 0; --deficit) {
    std::string best;
    double gap = -std::numeric_limits<double>::infinity();
    for (const auto& [c, k] : plan.train) {
      if (k >= remaining[c]) continue;
      const double g = static_cast<double>(spec.n_train) * static_cast<double>(counts.at(c)) /
                           static_cast<double>(total) -
                       static_cast<double>(k);
      if (g > gap) {
        gap = g;
        best = c;
      }
    }
    ++plan.train[best];
  }
  return plan;
}

double worst_deviation(const class_counts& alloc, const class_counts& counts, std::size_t n) {
  std::size_t total = 0;
  for (const auto& [c, k] : counts) total += k;
  double worst = 0.0;
  for (const auto& [c, k] : counts)
    worst = std::max(worst, std::abs(static_cast<double>(alloc.at(c)) -
                                     static_cast<double>(n) * static_cast<double>(k) / static_cast<double>(total)));
  return worst;
}

} // namespace

std::map<std::string, std::size_t> proportional_allocation(const std::map<std::string, std::size_t>& counts,
                                                           std::size_t n) {
  return apportion(counts, n, true);
}

split_result stratified_split(std::span<const event_record> records, const split_spec& spec) {
  if (spec.n_train == 0 || spec.n_test == 0) throw insufficient_data("split sizes must be positive");
  if (spec.n_train + spec.n_test > records.size())
    throw insufficient_data("requested " + std::to_string(spec.n_train + spec.n_test) + " records from a corpus of " +
                            std::to_string(records.size()));
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label) throw insufficient_data("record '" + records[i].id + "' has no label");
    members[*records[i].label].push_back(i);
  }
  const auto counts = label_counts(records);
  // seats for rare classes are a preference; the proportion bound is not
  seat_plan plan;
  for (auto [test_presence, train_presence] : {std::pair{true, true}, {false, true}, {true, false}, {false, false}}) {
    plan = split_seats(counts, spec, test_presence, train_presence);
    if (worst_deviation(plan.train, counts, spec.n_train) <= 1.0 &&
        worst_deviation(plan.test, counts, spec.n_test) <= 1.0)
      break;
  }
  const auto& test_alloc = plan.test;
  const auto& train_alloc = plan.train;

  random::engine rng(spec.seed);
  std::vector<char> side(records.size(), 0); // 1 train, 2 test
  for (auto& [c, idx] : members) {
    auto shuffled = idx;
    random::shuffle(shuffled, rng);
    const auto nt = test_alloc.at(c);
    const auto nr = train_alloc.at(c);
    for (std::size_t i = 0; i < nt; ++i) side[shuffled[i]] = 2;
    for (std::size_t i = nt; i < nt + nr; ++i) side[shuffled[i]] = 1;
  }
  split_result out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (side[i] == 1) out.train.push_back(records[i]);
    if (side[i] == 2) out.test.push_back(records[i]);
  }
  return out;
}

//
// coded series and statistics

std::vector<coded_record> ground_truth_coding(std::span<const event_record> records) {
  std::vector<coded_record> out;
  for (const auto& r : records) {
    coded_record c{r, {}};
    if (r.label) c.types.insert(*r.label);
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t time_series::total() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.count;
  return n;
}

std::string time_series::to_csv() const {
  std::string out = "period,count\n";
  for (const auto& p : points) out += p.period + "," + std::to_string(p.count) + "\n";
  return out;
}

time_series monthly_time_series(std::span<const coded_record> coded, const std::string& event_type,
                                const std::optional<std::string>& region, std::string source) {
  time_series ts{event_type, region, std::move(source), {}, 0};
  std::optional<calendar_date> lo, hi;
  std::map<std::string, std::size_t> counts;
  for (const auto& c : coded) {
    const auto& r = c.record;
    if (region && r.region != *region && r.country != *region) continue;
    const bool match = c.types.count(event_type) != 0;
    if (!r.date) {
      if (match) ++ts.undated;
      continue;
    }
    if (!lo || *r.date < *lo) lo = r.date;
    if (!hi || *r.date > *hi) hi = r.date;
    if (match) ++counts[r.date->month_key()];
  }
  if (!lo) return ts;
  int y = lo->year, m = lo->month;
  while (y < hi->year || (y == hi->year && m <= hi->month)) {
    const auto key = calendar_date{y, m, 1}.month_key();
    ts.points.push_back({key, counts.count(key) ? counts[key] : 0});
    if (++m == 13) {
      m = 1;
      ++y;
    }
  }
  return ts;
}

nlohmann::json corpus_statistics::to_json() const {
  nlohmann::json lengths_j = nlohmann::json::object();
  for (const auto& [len, n] : lengths) lengths_j[std::to_string(len)] = n;
  return {{"lengths", lengths_j}, {"unigrams", unigrams}, {"total_tokens", total_tokens}};
}

corpus_statistics corpus_stats(std::span<const event_record> records) {
  corpus_statistics s;
  for (const auto& r : records) {
    const auto toks = text::split_whitespace(text::to_lower_ascii(r.description));
    ++s.lengths[toks.size()];
    for (const auto& t : toks) ++s.unigrams[t];
    s.total_tokens += toks.size();
  }
  return s;
}

nlohmann::json coded_json(const event_record& record, const std::set<std::string>& types) {
  return {{"event_id", record.id}, {"description", record.description}, {"types", types}};
}

} // namespace prent
