#pragma once

// Synthetic datasets and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the code it is used to check,
// apart from month_of for bucketing.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stance/ingest.hpp"
#include "stance/scoring.hpp"
#include "stance/topics.hpp"

namespace stance::testing {

inline Timestamp utc(int y, unsigned mo, unsigned d, int h = 0, int mi = 0, int s = 0) {
  using namespace std::chrono;
  return sys_days{year{y} / month{mo} / day{d}} + hours{h} + minutes{mi} + seconds{s};
}

inline TweetRecord tweet(std::string id, std::string author, Timestamp at, Stance stance,
                         std::string topic = "politics",
                         Motivation motivation = Motivation::Motivating) {
  TweetRecord r;
  r.tweet_id = std::move(id);
  r.author_id = std::move(author);
  r.created_at = at;
  r.text = "text of " + r.tweet_id;
  r.topic = std::move(topic);
  r.stance = stance;
  r.motivation = motivation;
  return r;
}

struct GenOptions {
  std::size_t max_tweets = 1000;
  std::size_t max_authors = 50;
  // Timestamps fall on a coarse grid so that ties are common.
  int span_days = 400;
  int slots_per_day = 3;
  Motivation motivation = Motivation::Motivating;
};

/// Random, valid dataset in arbitrary (not chronological) order.
inline std::vector<TweetRecord> random_dataset(std::mt19937_64& rng, const GenOptions& opt = {}) {
  static const std::vector<std::string> kTopics = {
      "religion", "politics", "schools", "statistics", "generic", "Generic", "side effects",
      "Politics"};
  static const std::vector<std::string> kLocations = {"Chicago, IL", "São Paulo", "Berlin",
                                                      "東京", "DeKalb"};

  std::uniform_int_distribution<std::size_t> n_dist(1, opt.max_tweets);
  std::uniform_int_distribution<std::size_t> a_dist(1, opt.max_authors);
  std::size_t n = n_dist(rng);
  std::size_t authors = a_dist(rng);

  std::uniform_int_distribution<std::size_t> pick_author(0, authors - 1);
  std::uniform_int_distribution<int> pick_day(0, opt.span_days - 1);
  std::uniform_int_distribution<int> pick_slot(0, opt.slots_per_day - 1);
  std::uniform_int_distribution<std::size_t> pick_topic(0, kTopics.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_loc(0, kLocations.size());
  std::uniform_int_distribution<int> pick_stance(0, 2);
  std::uniform_int_distribution<std::uint64_t> pick_id;

  std::set<std::string> ids;
  std::vector<TweetRecord> out;
  out.reserve(n);
  auto base = utc(2020, 3, 1);
  while (out.size() < n) {
    // ids of mixed length so lexicographic order differs from numeric order
    std::string id = "t" + std::to_string(pick_id(rng) % 100000);
    if (!ids.insert(id).second) continue;
    TweetRecord r;
    r.tweet_id = id;
    r.author_id = "user" + std::to_string(pick_author(rng));
    r.created_at = base + std::chrono::days{pick_day(rng)} +
                   std::chrono::hours{8 * pick_slot(rng)};
    r.text = "tweet " + id + ", with \"quotes\"\nand a line break";
    r.topic = kTopics[pick_topic(rng)];
    r.stance = static_cast<Stance>(pick_stance(rng));
    r.motivation = opt.motivation;
    auto loc = pick_loc(rng);
    if (loc < kLocations.size()) r.location = kLocations[loc];
    out.push_back(std::move(r));
  }
  return out;
}

/// Own copy of the +1/-1/0 table.
inline int oracle_score(Stance s) {
  return s == Stance::Favor ? 1 : s == Stance::Against ? -1 : 0;
}

/// Author's running sum at the given tweet: the sum over every tweet by the
/// same author that is not later in (created_at, tweet_id) order. Quadratic.
inline std::map<std::string, std::int64_t> oracle_prefix_sums(
    const std::vector<TweetRecord>& records) {
  std::map<std::string, std::int64_t> out;
  for (const auto& r : records) {
    std::int64_t sum = 0;
    for (const auto& q : records) {
      if (q.author_id != r.author_id) continue;
      bool not_later = q.created_at < r.created_at ||
                       (q.created_at == r.created_at && q.tweet_id <= r.tweet_id);
      if (not_later) sum += oracle_score(q.stance);
    }
    out[r.tweet_id] = sum;
  }
  return out;
}

/// Authors with two opposite-sign non-zero scores, by checking every pair.
inline std::set<std::string> oracle_stance_changers(const std::vector<StancePoint>& points) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].author_id == points[j].author_id &&
          points[i].score.value() * points[j].score.value() < 0) {
        out.insert(points[i].author_id);
      }
    }
  }
  return out;
}

inline std::map<std::string, std::size_t> oracle_author_counts(
    const std::vector<TweetRecord>& records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    std::size_t n = 0;
    for (const auto& q : records) n += q.author_id == r.author_id;
    counts[r.author_id] = n;
  }
  return counts;
}

inline bool oracle_is_generic(const std::string& topic) {
  std::string lower = topic;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "generic";
}

/// (month, topic) -> count over non-generic records, by nested loops.
inline std::map<std::pair<MonthKey, std::string>, std::int64_t> oracle_topic_counts(
    const std::vector<TweetRecord>& records) {
  std::map<std::pair<MonthKey, std::string>, std::int64_t> out;
  for (const auto& r : records) {
    if (oracle_is_generic(r.topic)) continue;
    auto key = std::pair{month_of(r.created_at), r.topic};
    if (out.count(key)) continue;
    std::int64_t n = 0;
    for (const auto& q : records) {
      n += !oracle_is_generic(q.topic) && q.topic == r.topic &&
           month_of(q.created_at) == key.first;
    }
    out[key] = n;
  }
  return out;
}

inline std::map<MonthKey, std::int64_t> oracle_month_totals(const std::vector<TweetRecord>& records) {
  std::map<MonthKey, std::int64_t> out;
  for (const auto& r : records) {
    if (!oracle_is_generic(r.topic)) ++out[month_of(r.created_at)];
  }
  return out;
}

/// A dataset where every author clears the default activity threshold.
inline std::vector<TweetRecord> active_dataset(std::mt19937_64& rng, std::size_t authors,
                                               std::size_t per_author,
                                               Motivation motivation = Motivation::Motivating) {
  std::uniform_int_distribution<int> pick_day(0, 180);
  std::uniform_int_distribution<int> pick_stance(0, 2);
  static const std::vector<std::string> kTopics = {"religion", "politics", "schools", "generic"};
  std::uniform_int_distribution<std::size_t> pick_topic(0, kTopics.size() - 1);
  std::vector<TweetRecord> out;
  for (std::size_t a = 0; a < authors; ++a) {
    for (std::size_t k = 0; k < per_author; ++k) {
      auto id = "a" + std::to_string(a) + "k" + std::to_string(k);
      auto rec = tweet(id, "author" + std::to_string(a),
                       utc(2020, 9, 1) + std::chrono::days{pick_day(rng)},
                       static_cast<Stance>(pick_stance(rng)), kTopics[pick_topic(rng)],
                       motivation);
      if (k % 3 == 0) rec.location = "Location " + std::to_string(a);
      out.push_back(std::move(rec));
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace stance::testing
