#ifndef SOCIOLINK_CONFIG_H_
#define SOCIOLINK_CONFIG_H_

#include <map>
#include <string>
#include <string_view>

namespace sociolink {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues ParseKeyValues(std::string_view text,
                         const std::string &source = "<config>");
KeyValues LoadKeyValues(const std::string &path);

}  // namespace sociolink

#endif  // SOCIOLINK_CONFIG_H_
