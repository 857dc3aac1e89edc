#include "stance/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <initializer_list>
#include <iterator>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace stance {

namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 8> kColumns = {
    "tweet_id", "author_id", "created_at", "text",
    "topic",    "stance",    "motivation", "location"};

constexpr std::size_t kRequiredColumns = 7;  // all but location

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

template <typename Int>
bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > s.size()) return false;
  auto digits = s.substr(pos, len);
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + len, out);
  return ec == std::errc{} && ptr == digits.data() + len;
}

// One record's raw string fields, keyed by column slot; nullopt = field absent.
using RawRow = std::array<std::optional<std::string>, kColumns.size()>;

TweetRecord to_record(RawRow& raw, std::size_t row) {
  for (std::size_t i = 0; i < kRequiredColumns; ++i) {
    if (!raw[i]) throw ParseError::malformed(row, "missing field " + std::string(kColumns[i]));
  }
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (raw[i] && !is_valid_utf8(*raw[i]))
      throw ParseError::malformed(row, std::string(kColumns[i]) + " is not valid UTF-8");
  }

  TweetRecord rec;
  rec.tweet_id = std::move(*raw[0]);
  rec.author_id = std::move(*raw[1]);
  if (rec.tweet_id.empty()) throw ParseError::malformed(row, "empty tweet_id");
  if (rec.author_id.empty()) throw ParseError::malformed(row, "empty author_id");

  auto ts = parse_timestamp(trim(*raw[2]));
  if (!ts) throw ParseError::malformed(row, "bad created_at '" + *raw[2] + "'");
  rec.created_at = *ts;

  rec.text = std::move(*raw[3]);
  rec.topic = std::move(*raw[4]);
  if (rec.topic.empty()) throw ParseError::malformed(row, "empty topic");

  auto st = parse_stance(*raw[5]);
  if (!st) throw ParseError::malformed(row, "bad stance '" + *raw[5] + "'");
  rec.stance = *st;

  auto mot = parse_motivation(*raw[6]);
  if (!mot) throw ParseError::malformed(row, "bad motivation '" + *raw[6] + "'");
  rec.motivation = *mot;

  if (raw[7] && !raw[7]->empty()) rec.location = std::move(*raw[7]);
  return rec;
}

// RFC 4180 reader: quoted fields may hold separators, doubled quotes and
// line breaks. Returns false at end of input.
class DelimitedReader {
 public:
  explicit DelimitedReader(std::istream& in) : in_(in) {
    // byte order mark
    for (int b : {0xEF, 0xBB, 0xBF}) {
      if (in_.peek() != b) break;
      in_.get();
    }
  }

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
      int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (quoted) throw ParseError::malformed(record_, "unterminated quoted field");
        fields.push_back(std::move(field));
        return true;
      }
      char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty() && !was_quoted) {
        quoted = true;
        was_quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (ch == '\n' || ch == '\r') {
        if (ch == '\r' && in_.peek() == '\n') in_.get();
        fields.push_back(std::move(field));
        return true;
      } else if (was_quoted) {
        throw ParseError::malformed(record_, "text after closing quote");
      } else {
        field.push_back(ch);
      }
    }
  }

  void set_record(std::size_t record) { record_ = record; }

 private:
  std::istream& in_;
  std::size_t record_ = 0;
};

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

std::vector<TweetRecord> parse_delimited(std::istream& source) {
  DelimitedReader reader(source);
  std::vector<std::string> fields;

  std::vector<std::string> header;
  while (reader.next(header) && blank(header)) {
  }
  if (header.empty() || blank(header)) throw ParseError::empty();

  // slot[i] = column index of kColumns[i] in the file, or -1
  std::array<long, kColumns.size()> slot;
  slot.fill(-1);
  for (std::size_t col = 0; col < header.size(); ++col) {
    auto name = trim(header[col]);
    auto it = std::find(kColumns.begin(), kColumns.end(), name);
    if (it == kColumns.end()) continue;
    auto idx = static_cast<std::size_t>(it - kColumns.begin());
    if (slot[idx] >= 0) throw ParseError::malformed(0, "duplicate header " + std::string(name));
    slot[idx] = static_cast<long>(col);
  }
  for (std::size_t i = 0; i < kRequiredColumns; ++i) {
    if (slot[i] < 0) throw ParseError::malformed(0, "header lacks column " + std::string(kColumns[i]));
  }

  std::vector<TweetRecord> out;
  std::size_t row = 0;
  for (;;) {
    reader.set_record(row + 1);
    if (!reader.next(fields)) break;
    if (blank(fields)) continue;
    ++row;
    if (fields.size() != header.size()) {
      throw ParseError::malformed(row, "expected " + std::to_string(header.size()) +
                                           " fields, found " + std::to_string(fields.size()));
    }
    RawRow raw;
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
      if (slot[i] >= 0) raw[i] = std::move(fields[static_cast<std::size_t>(slot[i])]);
    }
    out.push_back(to_record(raw, row));
  }
  return out;
}

std::vector<TweetRecord> parse_line_records(std::istream& source) {
  std::vector<TweetRecord> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    if (trim(line).empty()) continue;
    ++row;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError::malformed(row, std::string("invalid record: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError::malformed(row, "record is not an object");
    RawRow raw;
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
      auto it = obj.find(std::string(kColumns[i]));
      if (it == obj.end() || it->is_null()) continue;
      if (!it->is_string()) {
        throw ParseError::malformed(row, std::string(kColumns[i]) + " must be a string");
      }
      raw[i] = it->get<std::string>();
    }
    out.push_back(to_record(raw, row));
  }
  return out;
}

void write_delimited_field(std::ostream& out, std::string_view value) {
  bool needs_quotes = value.find_first_of(",\"\r\n") != std::string_view::npos ||
                      (!value.empty() && (value.front() == ' ' || value.back() == ' '));
  if (!needs_quotes) {
    out << value;
    return;
  }
  out << '"';
  for (char c : value) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

ParseError ParseError::malformed(std::size_t row, std::string_view reason) {
  std::string msg = row == 0 ? "malformed header: " + std::string(reason)
                             : "malformed row " + std::to_string(row) + ": " + std::string(reason);
  return ParseError(Kind::MalformedRow, row, std::string(reason), std::move(msg));
}

ParseError ParseError::duplicate(std::string_view tweet_id, std::size_t row) {
  return ParseError(Kind::DuplicateId, row, std::string(tweet_id),
                    "duplicate tweet_id '" + std::string(tweet_id) + "' at row " +
                        std::to_string(row));
}

ParseError ParseError::empty() {
  return ParseError(Kind::EmptyInput, 0, {}, "input has no data rows");
}

std::vector<TweetRecord> parse_dataset(std::istream& source, InputFormat format) {
  auto records = format == InputFormat::DelimitedText ? parse_delimited(source)
                                                      : parse_line_records(source);
  if (source.bad()) throw ParseError::malformed(0, "read failure");
  if (records.empty()) throw ParseError::empty();

  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!seen.insert(records[i].tweet_id).second) {
      throw ParseError::duplicate(records[i].tweet_id, i + 1);
    }
  }
  return records;
}

void write_dataset(std::ostream& sink, std::span<const TweetRecord> records,
                   InputFormat format) {
  if (format == InputFormat::DelimitedText) {
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
      if (i) sink << ',';
      sink << kColumns[i];
    }
    sink << '\n';
    for (const auto& r : records) {
      const std::string fields[] = {r.tweet_id,
                                    r.author_id,
                                    format_timestamp(r.created_at),
                                    r.text,
                                    r.topic,
                                    std::string(to_string(r.stance)),
                                    std::string(to_string(r.motivation)),
                                    r.location.value_or("")};
      for (std::size_t i = 0; i < std::size(fields); ++i) {
        if (i) sink << ',';
        write_delimited_field(sink, fields[i]);
      }
      sink << '\n';
    }
    return;
  }

  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["tweet_id"] = r.tweet_id;
    obj["author_id"] = r.author_id;
    obj["created_at"] = format_timestamp(r.created_at);
    obj["text"] = r.text;
    obj["topic"] = r.topic;
    obj["stance"] = to_string(r.stance);
    obj["motivation"] = to_string(r.motivation);
    if (r.location) obj["location"] = *r.location;
    sink << obj.dump() << '\n';
  }
}

MonthKey month_of(Timestamp created_at) {
  year_month_day ymd{floor<days>(created_at)};
  return {static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month()))};
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  // YYYY-MM-DD
  int y = 0;
  unsigned mo = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!parse_fixed(s, 0, 4, y) || !parse_fixed(s, 5, 2, mo) || !parse_fixed(s, 8, 2, d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts = sys_days{ymd};
  if (s.size() == 10) return ts;

  // [T ]HH:MM[:SS[.fff]]
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (s.size() < 16 || s[13] != ':') return std::nullopt;
  if (!parse_fixed(s, 11, 2, hh) || !parse_fixed(s, 14, 2, mm)) return std::nullopt;
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    if (!parse_fixed(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  ts += hours{hh} + minutes{mm} + seconds{ss};

  // Z | ±HH:MM | ±HHMM | nothing (taken as UTC)
  auto zone = s.substr(pos);
  if (zone.empty() || zone == "Z" || zone == "z") return ts;
  if (zone[0] != '+' && zone[0] != '-') return std::nullopt;
  int oh = 0, om = 0;
  if (zone.size() == 6 && zone[3] == ':') {
    if (!parse_fixed(zone, 1, 2, oh) || !parse_fixed(zone, 4, 2, om)) return std::nullopt;
  } else if (zone.size() == 5) {
    if (!parse_fixed(zone, 1, 2, oh) || !parse_fixed(zone, 3, 2, om)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (oh > 23 || om > 59) return std::nullopt;
  auto offset = hours{oh} + minutes{om};
  return zone[0] == '+' ? ts - offset : ts + offset;
}

std::string format_timestamp(Timestamp ts) {
  auto day_point = floor<days>(ts);
  year_month_day ymd{day_point};
  hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

MonthKey MonthKey::next() const {
  return month == 12 ? MonthKey{year + 1, 1} : MonthKey{year, month + 1};
}

std::string MonthKey::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

std::optional<MonthKey> MonthKey::parse(std::string_view text) {
  MonthKey key;
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  if (!parse_fixed(text, 0, 4, key.year) || !parse_fixed(text, 5, 2, key.month))
    return std::nullopt;
  if (key.month < 1 || key.month > 12) return std::nullopt;
  return key;
}

std::optional<Stance> parse_stance(std::string_view label) {
  label = trim(label);
  if (iequals(label, "favor")) return Stance::Favor;
  if (iequals(label, "against")) return Stance::Against;
  if (iequals(label, "unrelated")) return Stance::Unrelated;
  return std::nullopt;
}

std::optional<Motivation> parse_motivation(std::string_view label) {
  label = trim(label);
  if (iequals(label, "motivating")) return Motivation::Motivating;
  if (iequals(label, "demotivating")) return Motivation::Demotivating;
  return std::nullopt;
}

std::string_view to_string(Stance stance) {
  switch (stance) {
    case Stance::Favor: return "favor";
    case Stance::Against: return "against";
    case Stance::Unrelated: return "unrelated";
  }
  return "unrelated";
}

std::string_view to_string(Motivation motivation) {
  return motivation == Motivation::Motivating ? "motivating" : "demotivating";
}

bool is_valid_utf8(std::string_view text) {
  auto bytes = reinterpret_cast<const unsigned char*>(text.data());
  std::size_t i = 0, n = text.size();
  while (i < n) {
    unsigned char c = bytes[i];
    std::size_t len;
    char32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((bytes[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (bytes[i + k] & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
      return false;
    i += len;
  }
  return true;
}

}  // namespace stance
