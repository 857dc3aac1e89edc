#include "stance/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "stance/wire.hpp"

namespace stance {

namespace {

using nlohmann::json;

// Exported prominence carries 6 decimals, so a re-imported value can sit up
// to half a unit in the last place away from the exact share.
constexpr double kProminenceTolerance = 5e-7 + 1e-12;

[[noreturn]] void schema(const std::string& path, const std::string& reason) {
  throw SnapshotError(SnapshotError::Kind::SchemaViolation, path, reason);
}

[[noreturn]] void invariant(const std::string& path, const std::string& reason) {
  throw SnapshotError(SnapshotError::Kind::InvariantViolation, path, reason);
}

std::string at(const std::string& base, std::string_view key) {
  return base + "/" + std::string(key);
}

std::string at(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

const json& member(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) schema(at(path, key), "missing");
  return *it;
}

void expect_keys(const json& obj, std::initializer_list<std::string_view> keys,
                 const std::string& path) {
  if (!obj.is_object()) schema(path.empty() ? "/" : path, "expected object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) schema(at(path, k), "unknown key");
  }
  for (auto k : keys) member(obj, k, path);
}

std::string get_string(const json& obj, std::string_view key, const std::string& path,
                       bool non_empty = true) {
  const auto& v = member(obj, key, path);
  if (!v.is_string()) schema(at(path, key), "expected string");
  auto s = v.get<std::string>();
  if (non_empty && s.empty()) schema(at(path, key), "empty string");
  return s;
}

std::int64_t get_integer(const json& obj, std::string_view key, const std::string& path) {
  const auto& v = member(obj, key, path);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) schema(at(path, key), "integer out of range");
  schema(at(path, key), "expected integer");
}

MonthKey to_month(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected month string");
  auto m = MonthKey::parse(v.get<std::string>());
  if (!m) schema(path, "expected YYYY-MM");
  return *m;
}

Timestamp to_timestamp(const std::string& text, const std::string& path) {
  auto ts = parse_timestamp(text);
  if (!ts || format_timestamp(*ts) != text) schema(path, "expected YYYY-MM-DDTHH:MM:SSZ");
  return *ts;
}

StancePoint read_point(const json& obj, const std::string& path) {
  expect_keys(obj,
              {"tweet_id", "author_id", "created_at", "month", "score", "cumulative_score",
               "topic"},
              path);
  StancePoint p;
  p.tweet_id = get_string(obj, "tweet_id", path);
  p.author_id = get_string(obj, "author_id", path);
  p.created_at = to_timestamp(get_string(obj, "created_at", path), at(path, "created_at"));
  p.month = to_month(obj.at("month"), at(path, "month"));
  auto score = StanceScore::from_int(get_integer(obj, "score", path));
  if (!score) schema(at(path, "score"), "expected -1, 0 or 1");
  p.score = *score;
  p.cumulative_score = get_integer(obj, "cumulative_score", path);
  p.topic = get_string(obj, "topic", path);
  return p;
}

TopicMonthStat read_stat(const json& obj, const std::string& path) {
  expect_keys(obj, {"topic", "month", "frequency", "prominence"}, path);
  TopicMonthStat s;
  s.topic = get_string(obj, "topic", path);
  s.month = to_month(obj.at("month"), at(path, "month"));
  s.frequency = get_integer(obj, "frequency", path);
  const auto& prom = obj.at("prominence");
  if (!prom.is_number()) schema(at(path, "prominence"), "expected number");
  s.prominence = prom.get<double>();
  return s;
}

TweetDetail read_detail(const json& obj, const std::string& path) {
  expect_keys(obj, {"text", "location", "topic"}, path);
  TweetDetail d;
  d.text = get_string(obj, "text", path, false);
  const auto& loc = obj.at("location");
  if (loc.is_string()) {
    d.location = loc.get<std::string>();
  } else if (!loc.is_null()) {
    schema(at(path, "location"), "expected string or null");
  }
  d.topic = get_string(obj, "topic", path);
  return d;
}

template <typename F>
auto read_array(const json& obj, std::string_view key, F&& read_one) {
  std::string path = at("", key);
  const auto& arr = member(obj, key, "");
  if (!arr.is_array()) schema(path, "expected array");
  std::vector<decltype(read_one(arr.front(), path))> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_one(arr[i], at(path, i)));
  return out;
}

}  // namespace

SnapshotError::SnapshotError(Kind kind, std::string path, std::string reason)
    : std::runtime_error((kind == Kind::SchemaViolation ? "schema violation at "
                                                        : "invariant violation at ") +
                         path + ": " + reason),
      kind_(kind),
      path_(std::move(path)),
      reason_(std::move(reason)) {}

std::optional<DatasetId> parse_dataset_id(std::string_view text) {
  if (text == "motivating") return DatasetId::Motivating;
  if (text == "demotivating") return DatasetId::Demotivating;
  return std::nullopt;
}

std::string format_prominence(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("0.000000");
}

DatasetSnapshot build_snapshot(std::span<const TweetRecord> records, DatasetId dataset_id,
                               std::size_t min_count) {
  for (const auto& r : records) {
    if (r.motivation != dataset_id) {
      throw BuildError(BuildError::Kind::MixedMotivation,
                       "tweet '" + r.tweet_id + "' is " + std::string(to_string(r.motivation)) +
                           " but the dataset is " + std::string(to_string(dataset_id)));
    }
  }

  auto active = filter_min_activity(records, min_count);
  if (active.empty()) {
    throw BuildError(BuildError::Kind::EmptyAfterFilter,
                     "no author has at least " + std::to_string(min_count) + " tweets");
  }

  DatasetSnapshot snap;
  snap.dataset_id = dataset_id;
  snap.points = compute_cumulative(active);
  snap.topic_stats = compute_topic_stats(exclude_generic(active));

  std::unordered_set<std::string_view> seen_authors;
  for (const auto& p : snap.points) {
    if (seen_authors.insert(p.author_id).second) snap.authors.push_back(p.author_id);
  }

  // points are chronological, so the first and last carry the month range
  for (auto m = snap.points.front().month; m <= snap.points.back().month; m = m.next()) {
    snap.months.push_back(m);
  }

  for (const auto& r : active) {
    snap.tweet_index.emplace(r.tweet_id, TweetDetail{r.text, r.location, r.topic});
  }
  return snap;
}

void export_snapshot(const DatasetSnapshot& snap, std::ostream& destination) {
  auto text = export_snapshot(snap);
  destination.write(text.data(), static_cast<std::streamsize>(text.size()));
  destination.flush();
  if (!destination) throw std::ios_base::failure("snapshot write failed");
}

std::string export_snapshot(const DatasetSnapshot& snap) {
  wire::JsonWriter w(wire::JsonWriter::Layout::Indented);
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(snap.dataset_id));
  w.key("months");
  wire::write(w, snap.months);
  w.key("authors");
  wire::write(w, snap.authors);
  w.key("points");
  w.begin_array();
  for (const auto& p : snap.points) wire::write(w, p);
  w.end_array();
  w.key("topic_stats");
  w.begin_array();
  for (const auto& s : snap.topic_stats) wire::write(w, s);
  w.end_array();
  w.key("tweet_index");
  w.begin_object();
  for (const auto& [id, detail] : snap.tweet_index) {
    w.key(id);
    wire::write(w, detail);
  }
  w.end_object();
  w.end_object();
  auto out = w.take();
  out.push_back('\n');
  return out;
}

DatasetSnapshot import_snapshot(std::istream& source) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  return import_snapshot(text);
}

DatasetSnapshot import_snapshot(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("/", std::string("not a JSON document: ") + e.what());
  }
  expect_keys(doc, {"dataset_id", "months", "authors", "points", "topic_stats", "tweet_index"},
              "");

  DatasetSnapshot snap;
  auto id = parse_dataset_id(get_string(doc, "dataset_id", ""));
  if (!id) schema("/dataset_id", "expected motivating or demotivating");
  snap.dataset_id = *id;

  snap.months = read_array(doc, "months", to_month);
  snap.authors = read_array(doc, "authors", [](const json& v, const std::string& path) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty())
      schema(path, "expected non-empty string");
    return v.get<std::string>();
  });
  snap.points = read_array(doc, "points", read_point);
  snap.topic_stats = read_array(doc, "topic_stats", read_stat);

  const auto& index = doc.at("tweet_index");
  if (!index.is_object()) schema("/tweet_index", "expected object");
  for (const auto& [id_text, detail] : index.items()) {
    snap.tweet_index.emplace(id_text, read_detail(detail, at("/tweet_index", id_text)));
  }

  validate_snapshot(snap);

  // The file holds rounded shares; restore the exact ones so that a
  // re-export is byte-identical and import(export(s)) == s.
  std::map<MonthKey, std::int64_t> month_totals;
  for (const auto& s : snap.topic_stats) month_totals[s.month] += s.frequency;
  for (auto& s : snap.topic_stats) {
    s.prominence = static_cast<double>(s.frequency) / static_cast<double>(month_totals[s.month]);
  }
  return snap;
}

void validate_snapshot(const DatasetSnapshot& snap) {
  if (snap.points.empty()) invariant("/points", "snapshot has no points");

  std::unordered_map<std::string_view, std::int64_t> running;
  std::vector<std::string> first_seen;
  std::unordered_set<std::string_view> seen_ids;
  for (std::size_t i = 0; i < snap.points.size(); ++i) {
    const auto& p = snap.points[i];
    std::string path = at("/points", i);
    if (!seen_ids.insert(p.tweet_id).second) invariant(at(path, "tweet_id"), "duplicate tweet_id");
    if (i > 0) {
      const auto& prev = snap.points[i - 1];
      if (!chronological_less(prev.created_at, prev.tweet_id, p.created_at, p.tweet_id))
        invariant(path, "points out of (created_at, tweet_id) order");
    }
    if (p.month != month_of(p.created_at)) invariant(at(path, "month"), "does not match created_at");
  }

  for (std::size_t i = 0; i < snap.points.size(); ++i) {
    const auto& p = snap.points[i];
    std::string path = at("/points", i);
    auto [it, inserted] = running.try_emplace(p.author_id, 0);
    if (inserted) first_seen.push_back(p.author_id);
    it->second += p.score.value();
    if (it->second != p.cumulative_score) {
      invariant(at(path, "cumulative_score"),
                "expected running sum " + std::to_string(it->second) + ", found " +
                    std::to_string(p.cumulative_score));
    }

    auto detail = snap.tweet_index.find(p.tweet_id);
    if (detail == snap.tweet_index.end()) invariant(at("/tweet_index", p.tweet_id), "missing");
    if (detail->second.topic != p.topic) invariant(at(at("/tweet_index", p.tweet_id), "topic"), "differs from point topic");
  }
  if (snap.tweet_index.size() != snap.points.size()) {
    for (const auto& [id, d] : snap.tweet_index) {
      if (!seen_ids.count(id)) invariant(at("/tweet_index", id), "no matching point");
    }
  }

  if (snap.authors != first_seen) invariant("/authors", "not the first-appearance order of points");

  std::vector<MonthKey> expected_months;
  for (auto m = snap.points.front().month; m <= snap.points.back().month; m = m.next())
    expected_months.push_back(m);
  if (snap.months != expected_months) invariant("/months", "not the contiguous range of point months");

  std::vector<std::pair<std::string_view, MonthKey>> labeled;
  labeled.reserve(snap.points.size());
  for (const auto& p : snap.points) labeled.emplace_back(p.topic, p.month);
  auto expected_stats = compute_topic_stats(labeled);
  if (expected_stats.size() != snap.topic_stats.size())
    invariant("/topic_stats", "expected " + std::to_string(expected_stats.size()) + " entries");
  for (std::size_t i = 0; i < expected_stats.size(); ++i) {
    const auto& want = expected_stats[i];
    const auto& got = snap.topic_stats[i];
    std::string path = at("/topic_stats", i);
    if (got.topic != want.topic || got.month != want.month || got.frequency != want.frequency)
      invariant(path, "does not match counts over points");
    if (!(std::fabs(got.prominence - want.prominence) <= kProminenceTolerance))
      invariant(at(path, "prominence"), "does not match frequency share");
  }
}

}  // namespace stance
