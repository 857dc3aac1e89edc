#include "stance/wire.hpp"

#include <nlohmann/json.hpp>

namespace stance::wire {

void JsonWriter::newline() {
  if (layout_ != Layout::Indented) return;
  out_.push_back('\n');
  out_.append(2 * first_.size(), ' ');
}

void JsonWriter::before_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (first_.empty()) return;
  if (!first_.back()) out_.push_back(',');
  first_.back() = false;
  newline();
}

void JsonWriter::begin_object() {
  before_value();
  out_.push_back('{');
  first_.push_back(true);
}

void JsonWriter::end_object() {
  bool empty = first_.back();
  first_.pop_back();
  if (!empty) newline();
  out_.push_back('}');
}

void JsonWriter::begin_array() {
  before_value();
  out_.push_back('[');
  first_.push_back(true);
}

void JsonWriter::end_array() {
  bool empty = first_.back();
  first_.pop_back();
  if (!empty) newline();
  out_.push_back(']');
}

void JsonWriter::key(std::string_view name) {
  before_value();
  append_quoted(name);
  out_.push_back(':');
  if (layout_ == Layout::Indented) out_.push_back(' ');
  after_key_ = true;
}

void JsonWriter::string(std::string_view value) {
  before_value();
  append_quoted(value);
}

void JsonWriter::append_quoted(std::string_view value) {
  out_ += nlohmann::json(std::string(value)).dump();
}

void JsonWriter::integer(std::int64_t value) {
  before_value();
  out_ += std::to_string(value);
}

void JsonWriter::number(std::string_view token) {
  before_value();
  out_ += token;
}

void JsonWriter::null() {
  before_value();
  out_ += "null";
}

void write(JsonWriter& w, const StancePoint& p) {
  w.begin_object();
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
  w.end_object();
}

void write(JsonWriter& w, const TopicMonthStat& s) {
  w.begin_object();
  w.key("topic");
  w.string(s.topic);
  w.key("month");
  w.string(s.month.to_string());
  w.key("frequency");
  w.integer(s.frequency);
  w.key("prominence");
  w.number(format_prominence(s.prominence));
  w.end_object();
}

void write(JsonWriter& w, const TweetDetail& d) {
  w.begin_object();
  w.key("text");
  w.string(d.text);
  w.key("location");
  if (d.location) {
    w.string(*d.location);
  } else {
    w.null();
  }
  w.key("topic");
  w.string(d.topic);
  w.end_object();
}

void write(JsonWriter& w, const std::vector<MonthKey>& months) {
  w.begin_array();
  for (const auto& m : months) w.string(m.to_string());
  w.end_array();
}

void write(JsonWriter& w, const std::vector<std::string>& strings) {
  w.begin_array();
  for (const auto& s : strings) w.string(s);
  w.end_array();
}

}  // namespace stance::wire
