#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace planvec {

/// One `key=value` entry and the 1-based line it came from.
struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

/// Parses flat key=value text. Blank lines and lines starting with '#'
/// are ignored; keys and values are trimmed. Throws Config on a line
/// without '=' or with an empty key.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Strict numeric parsing; throws Config naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
long long parse_integer(std::string_view s, std::string_view what);
bool parse_bool(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

}  // namespace planvec
