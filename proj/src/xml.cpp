#include "planvec/xml.hpp"

#include <cctype>
#include <cstdint>

#include <fmt/format.h>

namespace planvec::xml {

const std::string* Element::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

ParseError::ParseError(int line, int column, const std::string& what)
    : Error(ErrorCode::MalformedDocument, fmt::format("line {}, column {}: {}", line, column, what)),
      line_(line),
      column_(column) {}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Element parse_document() {
        skip_misc();
        if (eof() || peek() != '<') fail("expected root element");
        Element root = parse_element();
        skip_misc();
        if (!eof()) fail("content after root element");
        return root;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column_, what); }

    void skip_space() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    void skip_until(std::string_view terminator, const char* what) {
        while (!eof() && !starts_with(terminator)) advance();
        if (eof()) fail(fmt::format("unterminated {}", what));
        advance(terminator.size());
    }

    void skip_doctype() {
        advance(9);
        int depth = 0;
        while (!eof()) {
            const char c = peek();
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == '>' && depth <= 0) {
                advance();
                return;
            }
            advance();
        }
        fail("unterminated DOCTYPE");
    }

    // Comments, processing instructions, DOCTYPE and whitespace outside the root.
    void skip_misc() {
        while (true) {
            skip_space();
            if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    static bool is_name_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '/' && c != '>' && c != '=' && c != '<' &&
               c != '"' && c != '\'' && c != '\0';
    }

    std::string parse_name() {
        const std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) advance();
        if (pos_ == start) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    static void append_utf8(std::string& out, std::uint32_t cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    void parse_entity(std::string& out) {
        advance();  // '&'
        const std::size_t start = pos_;
        while (!eof() && peek() != ';' && pos_ - start < 12) advance();
        if (peek() != ';') fail("unterminated entity reference");
        const std::string_view name = text_.substr(start, pos_ - start);
        advance();
        if (name == "lt") out.push_back('<');
        else if (name == "gt") out.push_back('>');
        else if (name == "amp") out.push_back('&');
        else if (name == "quot") out.push_back('"');
        else if (name == "apos") out.push_back('\'');
        else if (name.size() > 1 && name[0] == '#') {
            const bool hex = name[1] == 'x' || name[1] == 'X';
            const std::string digits(name.substr(hex ? 2 : 1));
            char* end = nullptr;
            const unsigned long cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
            if (digits.empty() || *end != '\0' || cp > 0x10FFFF) fail("bad character reference");
            append_utf8(out, static_cast<std::uint32_t>(cp));
        } else {
            fail(fmt::format("unknown entity '&{};'", name));
        }
    }

    std::string parse_attribute_value() {
        const char quote = peek();
        if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
        advance();
        std::string value;
        while (!eof() && peek() != quote) {
            if (peek() == '<') fail("'<' in attribute value");
            if (peek() == '&') {
                parse_entity(value);
            } else {
                value.push_back(peek());
                advance();
            }
        }
        if (eof()) fail("unterminated attribute value");
        advance();
        return value;
    }

    Element parse_element() {
        Element el;
        el.line = line_;
        el.column = column_;
        advance();  // '<'
        el.name = parse_name();
        while (true) {
            const bool had_space = !eof() && std::isspace(static_cast<unsigned char>(peek()));
            skip_space();
            if (eof()) fail(fmt::format("unterminated start tag <{}>", el.name));
            if (peek() == '/') {
                advance();
                if (peek() != '>') fail("expected '>' after '/'");
                advance();
                return el;
            }
            if (peek() == '>') {
                advance();
                break;
            }
            if (!had_space) fail("expected whitespace between attributes");
            std::string key = parse_name();
            skip_space();
            if (peek() != '=') fail(fmt::format("attribute '{}' has no value", key));
            advance();
            skip_space();
            std::string value = parse_attribute_value();
            if (el.attribute(key) != nullptr) fail(fmt::format("duplicate attribute '{}'", key));
            el.attributes.emplace_back(std::move(key), std::move(value));
        }
        parse_content(el);
        return el;
    }

    void parse_content(Element& el) {
        while (true) {
            if (eof()) fail(fmt::format("element <{}> is never closed", el.name));
            if (starts_with("</")) {
                advance(2);
                const std::string name = parse_name();
                if (name != el.name) {
                    fail(fmt::format("mismatched end tag </{}>, expected </{}>", name, el.name));
                }
                skip_space();
                if (peek() != '>') fail("expected '>' in end tag");
                advance();
                return;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                skip_until("]]>", "CDATA section");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (peek() == '<') {
                el.children.push_back(parse_element());
            } else if (peek() == '&') {
                std::string discard;
                parse_entity(discard);
            } else {
                advance();
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace

Element parse(std::string_view text) { return Parser(text).parse_document(); }

}  // namespace planvec::xml
