#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stance/ingest.hpp"

namespace stance {

inline constexpr std::string_view kGenericTopic = "generic";

struct TopicMonthStat {
  std::string topic;
  MonthKey month;
  std::int64_t frequency = 0;
  /// frequency / non-generic tweets in the month.
  double prominence = 0.0;

  friend bool operator==(const TopicMonthStat&, const TopicMonthStat&) = default;
};

/// Case-insensitive match against the catch-all stopword topic. Every other
/// label compares case-sensitively.
bool is_generic_topic(std::string_view topic);

std::vector<TweetRecord> exclude_generic(std::span<const TweetRecord> records);

/// Per (topic, month) counts over non-generic records, sorted by month, then
/// descending frequency, then topic. Months without non-generic tweets emit
/// nothing.
std::vector<TopicMonthStat> compute_topic_stats(std::span<const TweetRecord> records);

/// Same aggregation over already-bucketed (topic, month) pairs.
std::vector<TopicMonthStat> compute_topic_stats(
    std::span<const std::pair<std::string_view, MonthKey>> labeled);

}  // namespace stance
