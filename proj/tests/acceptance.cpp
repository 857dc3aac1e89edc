// Exit criteria for the pipeline, snapshot, API and CLI. Prints one PASS/FAIL
// line per criterion and returns non-zero if any fails.
//
//   acceptance_suite <path to stancectl>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stance/ingest.hpp"
#include "stance/scoring.hpp"
#include "stance/service.hpp"
#include "stance/snapshot.hpp"
#include "stance/topics.hpp"
#include "support.hpp"

namespace {

using namespace stance;
namespace fs = std::filesystem;

constexpr int kRandomDatasets = 100;
constexpr std::size_t kMaxTweets = 1000;
constexpr std::size_t kMaxAuthors = 50;
constexpr double kProminenceSumTolerance = 1e-9;

// Collects the first few failure messages for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 5) messages_ += "\n      " + what;
  }
  [[nodiscard]] bool passed() const { return failures_ == 0; }
  [[nodiscard]] const std::string& messages() const { return messages_; }

 private:
  int failures_ = 0;
  std::string messages_;
};

struct Criterion {
  std::string name;
  std::function<void(Check&)> run;
};

testing::GenOptions random_options() {
  return {.max_tweets = kMaxTweets, .max_authors = kMaxAuthors};
}

void stance_mapping(Check& c) {
  c.expect(map_stance(Stance::Favor).value() == 1, "favor != +1");
  c.expect(map_stance(Stance::Against).value() == -1, "against != -1");
  c.expect(map_stance(Stance::Unrelated).value() == 0, "unrelated != 0");
}

void prefix_sum_oracle(Check& c) {
  std::mt19937_64 rng(20201);
  std::size_t ties = 0;
  for (int trial = 0; trial < kRandomDatasets; ++trial) {
    auto records = testing::random_dataset(rng, random_options());
    auto oracle = testing::oracle_prefix_sums(records);
    auto points = compute_cumulative(records);
    c.expect(points.size() == records.size(), "trial " + std::to_string(trial) + ": point count");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      auto it = oracle.find(p.tweet_id);
      c.expect(it != oracle.end() && it->second == p.cumulative_score,
               "trial " + std::to_string(trial) + ": " + p.tweet_id + " cumulative " +
                   std::to_string(p.cumulative_score));
      if (i > 0) {
        const auto& prev = points[i - 1];
        ties += prev.created_at == p.created_at;
        c.expect(prev.created_at < p.created_at ||
                     (prev.created_at == p.created_at && prev.tweet_id < p.tweet_id),
                 "trial " + std::to_string(trial) + ": order at " + std::to_string(i));
      }
    }
  }
  // the generator must actually exercise tie-breaking
  c.expect(ties > 0, "no timestamp ties generated");
}

void filter_boundary(Check& c) {
  std::mt19937_64 rng(20202);
  std::vector<TweetRecord> records;
  for (std::size_t count : {1u, 18u, 19u, 20u, 21u, 35u}) {
    for (int copy = 0; copy < 2; ++copy) {
      auto author = "n" + std::to_string(count) + "_" + std::to_string(copy);
      for (std::size_t k = 0; k < count; ++k) {
        records.push_back(testing::tweet(author + "_" + std::to_string(k), author,
                                         testing::utc(2020, 6, 1) + std::chrono::hours{int(k)},
                                         Stance::Favor));
      }
    }
  }
  std::shuffle(records.begin(), records.end(), rng);

  auto kept = filter_min_activity(records);
  auto input_counts = testing::oracle_author_counts(records);
  auto output_counts = testing::oracle_author_counts(kept);

  std::map<std::string, std::size_t> expected;
  for (const auto& [author, n] : input_counts) {
    if (n >= 20) expected[author] = n;
  }
  c.expect(output_counts == expected, "author multiset differs from counting oracle");
  c.expect(output_counts.count("n20_0") && output_counts.at("n20_0") == 20,
           "author with exactly 20 tweets not fully retained");
  c.expect(!output_counts.count("n19_0"), "author with 19 tweets retained");

  // random data too, across thresholds
  for (int trial = 0; trial < 20; ++trial) {
    auto data = testing::random_dataset(rng, random_options());
    auto counts = testing::oracle_author_counts(data);
    std::map<std::string, std::size_t> want;
    for (const auto& [author, n] : counts) {
      if (n >= 20) want[author] = n;
    }
    c.expect(testing::oracle_author_counts(filter_min_activity(data)) == want,
             "random trial " + std::to_string(trial));
  }
}

void topic_conservation(Check& c) {
  std::mt19937_64 rng(20203);
  for (int trial = 0; trial < kRandomDatasets; ++trial) {
    auto records = testing::random_dataset(rng, random_options());
    auto stats = compute_topic_stats(records);
    auto totals = testing::oracle_month_totals(records);
    std::map<MonthKey, std::int64_t> freq;
    std::map<MonthKey, double> prom;
    for (const auto& s : stats) {
      c.expect(!testing::oracle_is_generic(s.topic), "generic topic emitted");
      freq[s.month] += s.frequency;
      prom[s.month] += s.prominence;
    }
    c.expect(freq == totals, "trial " + std::to_string(trial) + ": frequency sums");
    for (const auto& [month, sum] : prom) {
      c.expect(std::fabs(sum - 1.0) <= kProminenceSumTolerance,
               "trial " + std::to_string(trial) + ": prominence sum " + month.to_string());
    }
  }
}

void stance_changers(Check& c) {
  std::mt19937_64 rng(20204);
  std::size_t flagged = 0;
  for (int trial = 0; trial < kRandomDatasets; ++trial) {
    // few tweets per author in half the trials so both outcomes occur
    auto opt = random_options();
    if (trial % 2) opt.max_tweets = 60;
    auto points = compute_cumulative(testing::random_dataset(rng, opt));
    auto got = find_stance_changers(points);
    flagged += got.size();
    c.expect(got == testing::oracle_stance_changers(points), "trial " + std::to_string(trial));
  }
  c.expect(flagged > 0, "no changers generated");
}

void snapshot_round_trip(Check& c) {
  std::mt19937_64 rng(20205);
  for (int trial = 0; trial < 20; ++trial) {
    auto records = testing::active_dataset(rng, 1 + trial % 7, 20 + trial);
    auto a = export_snapshot(build_snapshot(records, DatasetId::Motivating));
    auto b = export_snapshot(build_snapshot(records, DatasetId::Motivating));
    c.expect(a == b, "build->export not byte-identical");

    auto snap = build_snapshot(records, DatasetId::Motivating);
    auto back = import_snapshot(std::string_view(a));
    c.expect(back == snap, "import(export(s)) != s");
    c.expect(export_snapshot(back) == a, "export(import(export(s))) differs");

    auto doc = nlohmann::json::parse(a);
    auto& target = doc["points"][doc["points"].size() / 2]["cumulative_score"];
    target = target.get<std::int64_t>() + 1;
    try {
      import_snapshot(std::string_view(doc.dump()));
      c.expect(false, "tampered cumulative_score accepted");
    } catch (const SnapshotError& e) {
      c.expect(e.kind() == SnapshotError::Kind::InvariantViolation,
               std::string("wrong error kind: ") + e.what());
    }
  }
}

void api_contract(Check& c) {
  std::mt19937_64 rng(20206);
  auto records = testing::active_dataset(rng, 12, 30, Motivation::Demotivating);
  SnapshotStore store({build_snapshot(records, DatasetId::Demotivating)});
  const auto& snap = *store.find(DatasetId::Demotivating);
  auto get = [&](const std::string& path, QueryParams params = {}) {
    return handle_api_request(store, path, params);
  };
  auto ids = [](const ApiResponse& r) {
    std::vector<std::string> out;
    auto doc = nlohmann::json::parse(r.body);
    for (const auto& p : doc["points"]) out.push_back(p["tweet_id"]);
    return out;
  };

  const std::string stance = "/api/datasets/demotivating/stance";
  std::vector<MonthKey> probes = snap.months;
  probes.push_back({2019, 1});
  probes.push_back(snap.months.back().next());
  for (const auto& m : probes) {
    std::vector<std::string> want;
    for (const auto& p : snap.points) {
      if (p.month <= m) want.push_back(p.tweet_id);
    }
    auto r = get(stance, {{"upto", m.to_string()}});
    c.expect(r.status == 200 && ids(r) == want, "upto=" + m.to_string());
  }
  for (const auto& author : snap.authors) {
    std::vector<std::string> want;
    for (const auto& p : snap.points) {
      if (p.author_id == author) want.push_back(p.tweet_id);
    }
    auto r = get(stance, {{"author", author}});
    c.expect(r.status == 200 && ids(r) == want, "author=" + author);
  }
  c.expect(get("/api/tweets/unknown-id").status == 404, "unknown tweet not 404");

  for (const auto& path : {std::string("/api/datasets"), stance,
                           std::string("/api/datasets/demotivating/topics"),
                           "/api/tweets/" + snap.points.front().tweet_id}) {
    c.expect(get(path).body == get(path).body, "repeated body differs: " + path);
  }
}

int run_cli(const std::string& binary, const std::string& args) {
  int status = std::system((binary + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cli_exit_codes(Check& c, const std::string& binary) {
  auto dir = fs::temp_directory_path() / ("stance_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937_64 rng(20207);

  auto write = [&](const std::string& name, const std::vector<TweetRecord>& records) {
    auto path = dir / name;
    std::ofstream out(path);
    write_dataset(out, records, InputFormat::DelimitedText);
    return path.string();
  };
  auto good = write("good.csv", testing::active_dataset(rng, 3, 20));
  auto sparse = write("sparse.csv", testing::active_dataset(rng, 3, 19));
  auto malformed = (dir / "malformed.csv").string();
  std::ofstream(malformed) << "tweet_id,author_id,created_at,text,topic,stance,motivation\n"
                              "t1,a,2020-01-01,x,y,maybe,motivating\n";
  auto out = (dir / "out.json").string();

  auto build = [&](const std::string& input, const std::string& output) {
    return run_cli(binary, "build --input '" + input + "' --dataset motivating --output '" +
                               output + "'");
  };
  int code = build(good, out);
  c.expect(code == 0 && fs::exists(out), "success -> " + std::to_string(code));
  code = build(malformed, out);
  c.expect(code == 2, "malformed input -> " + std::to_string(code));
  code = build((dir / "absent.csv").string(), out);
  c.expect(code == 2, "unreadable input -> " + std::to_string(code));
  code = build(sparse, out);
  c.expect(code == 3, "empty after filter -> " + std::to_string(code));
  code = build(good, (dir / "no-such-dir" / "out.json").string());
  c.expect(code == 4, "write error -> " + std::to_string(code));

  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <stancectl>\n";
    return 2;
  }
  std::string binary = argv[1];

  std::vector<Criterion> criteria = {
      {"stance mapping favor/against/unrelated -> +1/-1/0", stance_mapping},
      {"cumulative scores match brute-force prefix sums (100 datasets)", prefix_sum_oracle},
      {"activity filter boundary 20 kept / 19 dropped", filter_boundary},
      {"topic frequency and prominence conservation", topic_conservation},
      {"stance changers match quadratic scan (100 datasets)", stance_changers},
      {"snapshot determinism, round trip, tamper rejection", snapshot_round_trip},
      {"API filters, 404 and repeatable bodies", api_contract},
      {"CLI exit codes 0/2/3/4", [&](Check& c) { cli_exit_codes(c, binary); }},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    std::cout << (check.passed() ? "PASS" : "FAIL") << "  " << criterion.name << "  ("
              << static_cast<long>(ms.count()) << " ms)" << check.messages() << '\n';
    failed += !check.passed();
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
