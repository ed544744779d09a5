#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planvec/error.hpp"

namespace planvec::xml {

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    int line = 0;
    int column = 0;

    /// Attribute value or nullptr when absent.
    const std::string* attribute(std::string_view key) const;
};

/// Thrown for malformed input; carries the 1-based location of the fault.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& what);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Non-validating parser for the element/attribute subset of XML.
/// Text content, comments, processing instructions, CDATA and DOCTYPE
/// declarations are consumed and dropped. Returns the root element.
Element parse(std::string_view text);

}  // namespace planvec::xml
