#include "stance/topics.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>

namespace stance {

bool is_generic_topic(std::string_view topic) {
  return topic.size() == kGenericTopic.size() &&
         std::equal(topic.begin(), topic.end(), kGenericTopic.begin(), [](char a, char b) {
           return std::tolower(static_cast<unsigned char>(a)) == b;
         });
}

std::vector<TweetRecord> exclude_generic(std::span<const TweetRecord> records) {
  std::vector<TweetRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const TweetRecord& r) { return !is_generic_topic(r.topic); });
  return out;
}

std::vector<TopicMonthStat> compute_topic_stats(std::span<const TweetRecord> records) {
  std::vector<std::pair<std::string_view, MonthKey>> labeled;
  labeled.reserve(records.size());
  for (const auto& r : records) labeled.emplace_back(r.topic, month_of(r.created_at));
  return compute_topic_stats(labeled);
}

std::vector<TopicMonthStat> compute_topic_stats(
    std::span<const std::pair<std::string_view, MonthKey>> labeled) {
  std::map<MonthKey, std::map<std::string_view, std::int64_t>> by_month;
  for (const auto& [topic, month] : labeled) {
    if (is_generic_topic(topic)) continue;
    ++by_month[month][topic];
  }

  std::vector<TopicMonthStat> out;
  for (const auto& [month, counts] : by_month) {
    std::int64_t total = 0;
    for (const auto& [topic, n] : counts) total += n;

    auto first = out.size();
    for (const auto& [topic, n] : counts) {
      out.push_back({std::string(topic), month, n,
                     static_cast<double>(n) / static_cast<double>(total)});
    }
    std::stable_sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                     [](const TopicMonthStat& a, const TopicMonthStat& b) {
                       return a.frequency > b.frequency;
                     });
  }
  return out;
}

}  // namespace stance
