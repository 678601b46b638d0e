#pragma once

// Line/token helpers shared by the text file readers.

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace losstomo::detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> tokens;
};

// Splits text into non-empty lines with '#' comments removed.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t pos = 0;
    while (pos < raw.size()) {
      while (pos < raw.size() && (raw[pos] == ' ' || raw[pos] == '\t' || raw[pos] == '\r')) ++pos;
      std::size_t start = pos;
      while (pos < raw.size() && raw[pos] != ' ' && raw[pos] != '\t' && raw[pos] != '\r') ++pos;
      if (pos > start) line.tokens.push_back(raw.substr(start, pos - start));
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace losstomo::detail
