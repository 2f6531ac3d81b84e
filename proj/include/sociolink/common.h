#ifndef SOCIOLINK_COMMON_H_
#define SOCIOLINK_COMMON_H_

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sociolink {

using EntityId = std::string;
using UserId = std::string;

// Label value meaning "this candidate is not linked to any entity".
inline constexpr int kNil = -1;

// Half-open token interval [start, end).
struct TokenSpan {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }

  // Non-empty intersection. Spans that only touch ([0,2) and [2,3)) do not
  // overlap.
  bool Overlaps(const TokenSpan &other) const {
    return start < other.end && other.start < end;
  }

  auto operator<=>(const TokenSpan &) const = default;
};

// Raised for malformed or inconsistent input data: parse failures, schema
// violations, dimension mismatches.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A DataError that carries the 1-based line number of the offending record.
class ParseError : public DataError {
 public:
  ParseError(const std::string &source, std::size_t line,
             const std::string &message);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Labels for the T mention candidates of one message. labels[t] is an index
// into candidates[t].candidates, or kNil.
struct Assignment {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool operator==(const Assignment &) const = default;
};

// Splits on ASCII whitespace and lowercases ASCII letters. Bytes >= 0x80 are
// passed through unchanged.
std::vector<std::string> Tokenize(const std::string &text);

std::string ToLower(std::string s);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// Strict full-string parse; throws DataError on trailing garbage.
double ParseDouble(std::string_view text);
long long ParseInt(std::string_view text);

// Joins tokens[start, end) with single spaces.
std::string JoinTokens(const std::vector<std::string> &tokens, int start,
                       int end);

}  // namespace sociolink

#endif  // SOCIOLINK_COMMON_H_
