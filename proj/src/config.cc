#include "sociolink/config.h"

#include <fstream>
#include <sstream>

#include "sociolink/common.h"

namespace sociolink {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues ParseKeyValues(std::string_view text, const std::string &source) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected key=value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(source, line_no, "empty key");
    if (!out.emplace(key, value).second) {
      throw ParseError(source, line_no, "duplicate key '" + key + "'");
    }
  }
  return out;
}

KeyValues LoadKeyValues(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseKeyValues(buf.str(), path);
}

}  // namespace sociolink
