#include "stance/scoring.hpp"

#include <algorithm>
#include <numeric>
#include <string_view>
#include <unordered_map>

namespace stance {

bool chronological_less(const Timestamp& a_time, const std::string& a_id,
                        const Timestamp& b_time, const std::string& b_id) {
  if (a_time != b_time) return a_time < b_time;
  return a_id < b_id;
}

std::vector<TweetRecord> filter_min_activity(std::span<const TweetRecord> records,
                                             std::size_t min_count) {
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& r : records) ++counts[r.author_id];

  std::vector<TweetRecord> out;
  for (const auto& r : records) {
    if (counts[r.author_id] >= min_count) out.push_back(r);
  }
  return out;
}

std::vector<StancePoint> compute_cumulative(std::span<const TweetRecord> records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chronological_less(records[a].created_at, records[a].tweet_id,
                              records[b].created_at, records[b].tweet_id);
  });

  std::unordered_map<std::string_view, std::int64_t> running;
  std::vector<StancePoint> points;
  points.reserve(records.size());
  for (std::size_t idx : order) {
    const auto& r = records[idx];
    auto score = map_stance(r.stance);
    auto& sum = running[r.author_id];
    sum += score.value();
    points.push_back(StancePoint{r.tweet_id, r.author_id, r.created_at,
                                 month_of(r.created_at), score, sum, r.topic});
  }
  return points;
}

std::set<std::string> find_stance_changers(std::span<const StancePoint> points) {
  // bit 0: seen a +1, bit 1: seen a -1
  std::unordered_map<std::string_view, unsigned> seen;
  for (const auto& p : points) {
    if (p.score.value() > 0) seen[p.author_id] |= 1u;
    if (p.score.value() < 0) seen[p.author_id] |= 2u;
  }
  std::set<std::string> changers;
  for (const auto& [author, bits] : seen) {
    if (bits == 3u) changers.emplace(author);
  }
  return changers;
}

}  // namespace stance
