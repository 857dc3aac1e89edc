#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

using Timestamp = std::chrono::sys_seconds;

enum class Stance { Favor, Against, Unrelated };
enum class Motivation { Motivating, Demotivating };

/// Calendar month in UTC. Canonical text form is "YYYY-MM".
struct MonthKey {
  int year = 1970;
  int month = 1;

  friend constexpr auto operator<=>(const MonthKey&, const MonthKey&) = default;

  [[nodiscard]] MonthKey next() const;
  [[nodiscard]] std::string to_string() const;

  /// Strict "YYYY-MM" parse; nullopt on anything else.
  static std::optional<MonthKey> parse(std::string_view text);
};

struct TweetRecord {
  std::string tweet_id;
  std::string author_id;
  Timestamp created_at;
  std::string text;
  std::string topic;
  Stance stance = Stance::Unrelated;
  Motivation motivation = Motivation::Motivating;
  std::optional<std::string> location;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

enum class InputFormat { DelimitedText, LineDelimitedRecords };

class ParseError : public std::runtime_error {
 public:
  enum class Kind { MalformedRow, DuplicateId, EmptyInput };

  ParseError(Kind kind, std::size_t row, std::string detail, std::string message)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        row_(row),
        detail_(std::move(detail)) {}

  static ParseError malformed(std::size_t row, std::string_view reason);
  static ParseError duplicate(std::string_view tweet_id, std::size_t row);
  static ParseError empty();

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  /// 1-based data row (header excluded); 0 when not tied to a row.
  [[nodiscard]] std::size_t row() const noexcept { return row_; }
  /// Reason for MalformedRow, offending id for DuplicateId.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::size_t row_;
  std::string detail_;
};

/// Reads a whole labeled-tweet file. Any bad row rejects the file.
std::vector<TweetRecord> parse_dataset(std::istream& source, InputFormat format);

/// Writes records in the same schema parse_dataset reads.
void write_dataset(std::ostream& sink, std::span<const TweetRecord> records,
                   InputFormat format);

MonthKey month_of(Timestamp created_at);

/// ISO-8601 date or date-time. Date-only values land on 00:00:00Z,
/// numeric offsets are folded into UTC, fractional seconds are dropped.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

std::optional<Stance> parse_stance(std::string_view label);
std::optional<Motivation> parse_motivation(std::string_view label);
std::string_view to_string(Stance stance);
std::string_view to_string(Motivation motivation);

bool is_valid_utf8(std::string_view text);

}  // namespace stance
