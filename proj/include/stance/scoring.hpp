#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stance/ingest.hpp"

namespace stance {

/// A single tweet's stance contribution: -1, 0 or +1.
class StanceScore {
 public:
  constexpr StanceScore() = default;

  /// nullopt unless value is -1, 0 or +1.
  static constexpr std::optional<StanceScore> from_int(std::int64_t value) {
    if (value < -1 || value > 1) return std::nullopt;
    return StanceScore(static_cast<int>(value));
  }

  [[nodiscard]] constexpr int value() const noexcept { return value_; }

  friend constexpr bool operator==(StanceScore, StanceScore) = default;

 private:
  constexpr explicit StanceScore(int v) : value_(v) {}
  int value_ = 0;
};

struct StancePoint {
  std::string tweet_id;
  std::string author_id;
  Timestamp created_at;
  MonthKey month;
  StanceScore score;
  /// Author's running sum up to and including this tweet.
  std::int64_t cumulative_score = 0;
  std::string topic;

  friend bool operator==(const StancePoint&, const StancePoint&) = default;
};

inline constexpr std::size_t kDefaultMinActivity = 20;

constexpr StanceScore map_stance(Stance stance) {
  switch (stance) {
    case Stance::Favor: return *StanceScore::from_int(1);
    case Stance::Against: return *StanceScore::from_int(-1);
    case Stance::Unrelated: break;
  }
  return *StanceScore::from_int(0);
}

/// Keeps only records of authors with at least min_count records in the
/// input. Order is preserved.
std::vector<TweetRecord> filter_min_activity(std::span<const TweetRecord> records,
                                             std::size_t min_count = kDefaultMinActivity);

/// One point per record, globally ordered by (created_at, tweet_id), with
/// each author's running sum taken in that same order.
std::vector<StancePoint> compute_cumulative(std::span<const TweetRecord> records);

/// Authors with at least one +1 and one -1 tweet. Unrelated tweets do not
/// count as a change in either direction.
std::set<std::string> find_stance_changers(std::span<const StancePoint> points);

/// Chronological order used everywhere a total order over tweets is needed.
bool chronological_less(const Timestamp& a_time, const std::string& a_id,
                        const Timestamp& b_time, const std::string& b_id);

}  // namespace stance
