#include "planvec/key_value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "planvec/error.hpp"

namespace planvec {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line[0] == '#') {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Config, fmt::format("line {}: expected key=value, got '{}'", line_no, line));
        }
        KeyValue kv{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
        if (kv.key.empty()) {
            throw Error(ErrorCode::Config, fmt::format("line {}: empty key", line_no));
        }
        out.push_back(std::move(kv));
        if (end == text.size()) break;
    }
    return out;
}

double parse_double(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    char* endp = nullptr;
    const double v = std::strtod(t.c_str(), &endp);
    if (t.empty() || endp != t.c_str() + t.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::Config, fmt::format("{}: '{}' is not a number", what, t));
    }
    return v;
}

long long parse_integer(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::Config, fmt::format("{}: '{}' is not an integer", what, t));
    }
    return v;
}

bool parse_bool(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw Error(ErrorCode::Config, fmt::format("{}: '{}' is not a boolean", what, t));
}

std::vector<double> parse_double_list(std::string_view s, std::string_view what) {
    std::vector<double> out;
    std::string normalized(s);
    for (char& c : normalized) {
        if (c == ';' || c == ' ') c = ',';
    }
    for (const auto& part : split(normalized, ',')) {
        if (!part.empty()) out.push_back(parse_double(part, what));
    }
    return out;
}

}  // namespace planvec
