#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stance/snapshot.hpp"

namespace httplib {
class Server;
}

namespace stance {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> snapshot_paths;
  std::optional<std::string> static_dir;

  /// Throws std::invalid_argument when no snapshot is configured or the
  /// port is outside 1-65535.
  void validate() const;
};

/// "host:port" or bare "port".
std::optional<std::pair<std::string, int>> parse_listen_address(std::string_view text);

/// Loaded, validated snapshots. Immutable once constructed, so any number
/// of request threads may read it at once.
class SnapshotStore {
 public:
  /// Throws std::invalid_argument if two snapshots share a dataset_id.
  explicit SnapshotStore(std::vector<DatasetSnapshot> snapshots);

  /// Reads each file through import_snapshot. Errors carry the path.
  static SnapshotStore load(const std::vector<std::string>& paths);

  [[nodiscard]] const std::vector<DatasetSnapshot>& snapshots() const noexcept {
    return snapshots_;
  }
  [[nodiscard]] const DatasetSnapshot* find(DatasetId id) const;

  struct TweetHit {
    const DatasetSnapshot* snapshot;
    const StancePoint* point;
    const TweetDetail* detail;
  };
  [[nodiscard]] std::optional<TweetHit> find_tweet(std::string_view tweet_id) const;

 private:
  std::vector<DatasetSnapshot> snapshots_;
  // tweet_id -> (snapshot index, point index); first loaded snapshot wins
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> tweets_;
};

struct ApiResponse {
  int status = 200;
  std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Pure routing over the store. path is already percent-decoded.
///
///   GET /api/datasets
///   GET /api/datasets/{id}/meta
///   GET /api/datasets/{id}/topics[?month=YYYY-MM]
///   GET /api/datasets/{id}/stance[?upto=YYYY-MM][&author=A]
///   GET /api/datasets/{id}/stance-changers
///   GET /api/tweets/{tweet_id}
ApiResponse handle_api_request(const SnapshotStore& store, std::string_view path,
                               const QueryParams& params);

/// HTTP front end for handle_api_request, plus optional static hosting of
/// the UI bundle.
class HttpService {
 public:
  HttpService(std::shared_ptr<const SnapshotStore> store,
              std::optional<std::string> static_dir = std::nullopt);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  std::shared_ptr<const SnapshotStore> store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace stance
