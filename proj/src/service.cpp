#include "stance/service.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <httplib.h>

#include "stance/wire.hpp"

namespace stance {

namespace {

using wire::JsonWriter;

ApiResponse error(int status, std::string_view message) {
  JsonWriter w;
  w.begin_object();
  w.key("error");
  w.string(message);
  w.end_object();
  return {status, w.take()};
}

ApiResponse ok(JsonWriter& w) { return {200, w.take()}; }

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    auto end = path.find('/');
    parts.push_back(path.substr(0, end));
    if (end == std::string_view::npos) break;
    path.remove_prefix(end);
  }
  return parts;
}

// Rejects unknown and repeated parameters; returns an error message or "".
std::string check_params(const QueryParams& params,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [name, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      return "unknown query parameter '" + name + "'";
    if (params.count(name) > 1) return "query parameter '" + name + "' given more than once";
  }
  return {};
}

std::optional<std::string_view> param(const QueryParams& params, std::string_view name) {
  auto it = params.find(std::string(name));
  if (it == params.end()) return std::nullopt;
  return it->second;
}

ApiResponse list_datasets(const SnapshotStore& store) {
  JsonWriter w;
  w.begin_object();
  w.key("datasets");
  w.begin_array();
  for (const auto& s : store.snapshots()) w.string(to_string(s.dataset_id));
  w.end_array();
  w.end_object();
  return ok(w);
}

ApiResponse meta(const DatasetSnapshot& snap) {
  JsonWriter w;
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(snap.dataset_id));
  w.key("months");
  wire::write(w, snap.months);
  w.key("authors");
  wire::write(w, snap.authors);
  w.key("point_count");
  w.integer(static_cast<std::int64_t>(snap.points.size()));
  w.end_object();
  return ok(w);
}

ApiResponse topics(const DatasetSnapshot& snap, const QueryParams& params) {
  if (auto msg = check_params(params, {"month"}); !msg.empty()) return error(400, msg);
  std::optional<MonthKey> month;
  if (auto text = param(params, "month")) {
    month = MonthKey::parse(*text);
    if (!month) return error(400, "month must be YYYY-MM");
    if (std::find(snap.months.begin(), snap.months.end(), *month) == snap.months.end())
      return error(404, "month " + month->to_string() + " is not in this dataset");
  }

  JsonWriter w;
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(snap.dataset_id));
  if (month) {
    w.key("month");
    w.string(month->to_string());
  }
  w.key("topic_stats");
  w.begin_array();
  for (const auto& s : snap.topic_stats) {
    if (!month || s.month == *month) wire::write(w, s);
  }
  w.end_array();
  w.end_object();
  return ok(w);
}

ApiResponse stance_points(const DatasetSnapshot& snap, const QueryParams& params) {
  if (auto msg = check_params(params, {"upto", "author"}); !msg.empty()) return error(400, msg);
  std::optional<MonthKey> upto;
  if (auto text = param(params, "upto")) {
    upto = MonthKey::parse(*text);
    if (!upto) return error(400, "upto must be YYYY-MM");
  }
  auto author = param(params, "author");
  if (author) {
    if (author->empty()) return error(400, "author must not be empty");
    if (std::find(snap.authors.begin(), snap.authors.end(), *author) == snap.authors.end())
      return error(404, "unknown author '" + std::string(*author) + "'");
  }

  JsonWriter w;
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(snap.dataset_id));
  w.key("points");
  w.begin_array();
  for (const auto& p : snap.points) {
    if (upto && p.month > *upto) continue;
    if (author && p.author_id != *author) continue;
    wire::write(w, p);
  }
  w.end_array();
  w.end_object();
  return ok(w);
}

ApiResponse stance_changers(const DatasetSnapshot& snap) {
  JsonWriter w;
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(snap.dataset_id));
  w.key("authors");
  w.begin_array();
  for (const auto& a : find_stance_changers(snap.points)) w.string(a);
  w.end_array();
  w.end_object();
  return ok(w);
}

ApiResponse tweet(const SnapshotStore::TweetHit& hit) {
  const auto& p = *hit.point;
  JsonWriter w;
  w.begin_object();
  w.key("dataset_id");
  w.string(to_string(hit.snapshot->dataset_id));
  w.key("tweet_id");
  w.string(p.tweet_id);
  w.key("author_id");
  w.string(p.author_id);
  w.key("created_at");
  w.string(format_timestamp(p.created_at));
  w.key("month");
  w.string(p.month.to_string());
  w.key("score");
  w.integer(p.score.value());
  w.key("cumulative_score");
  w.integer(p.cumulative_score);
  w.key("topic");
  w.string(p.topic);
  w.key("text");
  w.string(hit.detail->text);
  w.key("location");
  if (hit.detail->location) {
    w.string(*hit.detail->location);
  } else {
    w.null();
  }
  w.end_object();
  return ok(w);
}

}  // namespace

void ServiceConfig::validate() const {
  if (snapshot_paths.empty()) throw std::invalid_argument("no snapshot files configured");
  if (port < 1 || port > 65535) {
    throw std::invalid_argument("port " + std::to_string(port) + " is outside 1-65535");
  }
}

std::optional<std::pair<std::string, int>> parse_listen_address(std::string_view text) {
  std::string host = "127.0.0.1";
  auto colon = text.rfind(':');
  std::string_view port_text = text;
  if (colon != std::string_view::npos) {
    host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']')
      host = host.substr(1, host.size() - 2);
    if (host.empty()) return std::nullopt;
  }
  int port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size()) return std::nullopt;
  return std::pair{host, port};
}

SnapshotStore::SnapshotStore(std::vector<DatasetSnapshot> snapshots)
    : snapshots_(std::move(snapshots)) {
  for (std::size_t s = 0; s < snapshots_.size(); ++s) {
    for (std::size_t prev = 0; prev < s; ++prev) {
      if (snapshots_[prev].dataset_id == snapshots_[s].dataset_id) {
        throw std::invalid_argument("dataset " + std::string(to_string(snapshots_[s].dataset_id)) +
                                    " loaded twice");
      }
    }
    const auto& points = snapshots_[s].points;
    for (std::size_t i = 0; i < points.size(); ++i) tweets_.try_emplace(points[i].tweet_id, s, i);
  }
}

SnapshotStore SnapshotStore::load(const std::vector<std::string>& paths) {
  std::vector<DatasetSnapshot> snapshots;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot " + path);
    try {
      snapshots.push_back(import_snapshot(in));
    } catch (const SnapshotError& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  return SnapshotStore(std::move(snapshots));
}

const DatasetSnapshot* SnapshotStore::find(DatasetId id) const {
  for (const auto& s : snapshots_) {
    if (s.dataset_id == id) return &s;
  }
  return nullptr;
}

std::optional<SnapshotStore::TweetHit> SnapshotStore::find_tweet(std::string_view tweet_id) const {
  auto it = tweets_.find(std::string(tweet_id));
  if (it == tweets_.end()) return std::nullopt;
  const auto& snap = snapshots_[it->second.first];
  const auto& point = snap.points[it->second.second];
  return TweetHit{&snap, &point, &snap.tweet_index.find(point.tweet_id)->second};
}

ApiResponse handle_api_request(const SnapshotStore& store, std::string_view path,
                               const QueryParams& params) {
  auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return error(404, "no such endpoint");

  if (parts[1] == "tweets") {
    if (parts.size() != 3) return error(404, "no such endpoint");
    if (!params.empty()) return error(400, "tweet lookup takes no query parameters");
    auto hit = store.find_tweet(parts[2]);
    if (!hit) return error(404, "unknown tweet '" + std::string(parts[2]) + "'");
    return tweet(*hit);
  }

  if (parts[1] != "datasets") return error(404, "no such endpoint");
  if (parts.size() == 2) {
    if (!params.empty()) return error(400, "dataset listing takes no query parameters");
    return list_datasets(store);
  }
  if (parts.size() != 4) return error(404, "no such endpoint");

  auto id = parse_dataset_id(parts[2]);
  const DatasetSnapshot* snap = id ? store.find(*id) : nullptr;
  if (!snap) return error(404, "unknown dataset '" + std::string(parts[2]) + "'");

  auto view = parts[3];
  if (view == "topics") return topics(*snap, params);
  if (view == "stance") return stance_points(*snap, params);
  if (view == "meta" || view == "stance-changers") {
    if (!params.empty()) return error(400, std::string(view) + " takes no query parameters");
    return view == "meta" ? meta(*snap) : stance_changers(*snap);
  }
  return error(404, "no such endpoint");
}

HttpService::HttpService(std::shared_ptr<const SnapshotStore> store,
                         std::optional<std::string> static_dir)
    : store_(std::move(store)), server_(std::make_unique<httplib::Server>()) {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

  server_->Get(R"(/api(/.*)?)", [store = store_](const httplib::Request& req,
                                                 httplib::Response& res) {
    auto reply = handle_api_request(*store, req.path, req.params);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  server_->Options(R"(/api(/.*)?)",
                   [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  if (static_dir && !server_->set_mount_point("/", *static_dir)) {
    throw std::invalid_argument("static directory " + *static_dir + " does not exist");
  }
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen_after_bind() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_->is_running()) server_->stop();
}

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace stance
