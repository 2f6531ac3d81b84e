#include "sociolink/common.h"

#include <cctype>
#include <charconv>
#include <system_error>

namespace sociolink {

ParseError::ParseError(const std::string &source, std::size_t line,
                       const std::string &message)
    : DataError(source + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

std::string ToLower(std::string s) {
  for (char &c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const char *first = text.data();
  const char *last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long ParseInt(std::string_view text) {
  long long value = 0;
  const char *first = text.data();
  const char *last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DataError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> Tokenize(const std::string &text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(ToLower(std::move(current)));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(ToLower(std::move(current)));
  return tokens;
}

std::string JoinTokens(const std::vector<std::string> &tokens, int start,
                       int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace sociolink
