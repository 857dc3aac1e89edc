#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stance/scoring.hpp"
#include "stance/snapshot.hpp"
#include "stance/topics.hpp"

namespace stance::wire {

/// Streaming JSON emitter with a fixed layout. Callers are responsible for
/// well-formed nesting; keys are written in call order.
class JsonWriter {
 public:
  enum class Layout { Compact, Indented };

  explicit JsonWriter(Layout layout = Layout::Compact) : layout_(layout) {}

  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(std::string_view name);
  void string(std::string_view value);
  void integer(std::int64_t value);
  /// Pre-formatted numeric token, emitted verbatim.
  void number(std::string_view token);
  void null();

  [[nodiscard]] const std::string& str() const noexcept { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void before_value();
  void newline();
  void append_quoted(std::string_view value);

  Layout layout_;
  std::string out_;
  // One entry per open container: true until its first element is written.
  std::vector<bool> first_;
  bool after_key_ = false;
};

void write(JsonWriter& w, const StancePoint& point);
void write(JsonWriter& w, const TopicMonthStat& stat);
void write(JsonWriter& w, const TweetDetail& detail);
void write(JsonWriter& w, const std::vector<MonthKey>& months);
void write(JsonWriter& w, const std::vector<std::string>& strings);

}  // namespace stance::wire
