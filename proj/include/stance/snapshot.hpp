#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stance/ingest.hpp"
#include "stance/scoring.hpp"
#include "stance/topics.hpp"

namespace stance {

/// The two selectable datasets are the two motivation classes.
using DatasetId = Motivation;

std::optional<DatasetId> parse_dataset_id(std::string_view text);

/// What the detail panel needs for one tweet beyond its stance point.
struct TweetDetail {
  std::string text;
  std::optional<std::string> location;
  std::string topic;

  friend bool operator==(const TweetDetail&, const TweetDetail&) = default;
};

/// Immutable derived artifact for one dataset.
///
/// points are globally ordered by (created_at, tweet_id); authors follow
/// first appearance in points; months run contiguously from the first to
/// the last month that has a point; tweet_index holds exactly the point ids.
struct DatasetSnapshot {
  DatasetId dataset_id = DatasetId::Motivating;
  std::vector<StancePoint> points;
  std::vector<TopicMonthStat> topic_stats;
  std::vector<std::string> authors;
  std::vector<MonthKey> months;
  std::map<std::string, TweetDetail, std::less<>> tweet_index;

  friend bool operator==(const DatasetSnapshot&, const DatasetSnapshot&) = default;
};

class BuildError : public std::runtime_error {
 public:
  enum class Kind { MixedMotivation, EmptyAfterFilter };
  BuildError(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class SnapshotError : public std::runtime_error {
 public:
  enum class Kind { SchemaViolation, InvariantViolation };
  SnapshotError(Kind kind, std::string path, std::string reason);
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  /// JSON pointer of the offending element.
  [[nodiscard]] const std::string& path() const noexcept { return path_; }
  [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

 private:
  Kind kind_;
  std::string path_;
  std::string reason_;
};

/// filter_min_activity -> compute_cumulative -> compute_topic_stats.
/// Stance points keep generic-topic tweets; topic stats drop them.
DatasetSnapshot build_snapshot(std::span<const TweetRecord> records, DatasetId dataset_id,
                               std::size_t min_count = kDefaultMinActivity);

/// Canonical byte-stable JSON. Throws std::ios_base::failure when the sink
/// goes bad.
void export_snapshot(const DatasetSnapshot& snapshot, std::ostream& destination);
std::string export_snapshot(const DatasetSnapshot& snapshot);

/// Parses and fully re-validates an export, including re-deriving every
/// cumulative score and topic stat.
DatasetSnapshot import_snapshot(std::istream& source);
DatasetSnapshot import_snapshot(std::string_view text);

/// Throws SnapshotError(InvariantViolation) on the first broken invariant.
void validate_snapshot(const DatasetSnapshot& snapshot);

/// Fixed 6-digit decimal, ties to even.
std::string format_prominence(double value);

}  // namespace stance
