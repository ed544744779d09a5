#include "planvec/svg_annotations.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "planvec/key_value.hpp"
#include "planvec/raster.hpp"
#include "planvec/xml.hpp"

namespace planvec {

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Stairs: return "Stairs";
        case ShapeKind::Railing: return "Railing";
        case ShapeKind::Wall: return "Wall";
        case ShapeKind::Window: return "Window";
        case ShapeKind::Door: return "Door";
        case ShapeKind::Column: return "Column";
    }
    return "?";
}

ShapeKind parse_shape_kind(std::string_view name) {
    for (ShapeKind k : {ShapeKind::Stairs, ShapeKind::Railing, ShapeKind::Wall, ShapeKind::Window,
                        ShapeKind::Door, ShapeKind::Column}) {
        if (to_string(k) == name) return k;
    }
    throw Error(ErrorCode::Config, fmt::format("unknown shape kind '{}'", name));
}

int drawing_order(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Wall:
        case ShapeKind::Column: return 1;
        case ShapeKind::Stairs: return 2;
        case ShapeKind::Railing: return 3;
        case ShapeKind::Door: return 4;
        case ShapeKind::Window: return 5;
    }
    return 0;
}

ClassId shape_class(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Wall:
        case ShapeKind::Column: return classes::kWall;
        case ShapeKind::Stairs: return classes::kStairs;
        case ShapeKind::Railing: return classes::kRailing;
        case ShapeKind::Door: return classes::kDoor;
        case ShapeKind::Window: return classes::kWindow;
    }
    return classes::kBackground;
}

ShapeVocabulary ShapeVocabulary::defaults() {
    ShapeVocabulary v;
    for (ShapeKind k : {ShapeKind::Stairs, ShapeKind::Railing, ShapeKind::Wall, ShapeKind::Window,
                        ShapeKind::Door, ShapeKind::Column}) {
        v.set(std::string(to_string(k)), k);
    }
    return v;
}

ShapeVocabulary ShapeVocabulary::from_config(std::string_view text) {
    ShapeVocabulary v;
    for (const auto& kv : parse_key_values(text)) {
        try {
            v.set(kv.key, parse_shape_kind(kv.value));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, fmt::format("line {}: {}", kv.line, e.what()));
        }
    }
    return v;
}

std::optional<ShapeKind> ShapeVocabulary::lookup(std::string_view token) const {
    const auto it = map_.find(token);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

namespace {

// 2x3 affine map: x' = a x + c y + e, y' = b x + d y + f.
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Point2 apply(Point2 p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }

    Affine then(const Affine& inner) const {
        // this * inner: inner is applied first.
        return {a * inner.a + c * inner.b,
                b * inner.a + d * inner.b,
                a * inner.c + c * inner.d,
                b * inner.c + d * inner.d,
                a * inner.e + c * inner.f + e,
                b * inner.e + d * inner.f + f};
    }

    double scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

[[noreturn]] void geometry_error(const xml::Element& el, const std::string& what) {
    throw Error(ErrorCode::UnparseableGeometry,
                fmt::format("line {}, column {}: <{}> {}", el.line, el.column, el.name, what));
}

std::vector<double> parse_numbers(const xml::Element& el, std::string_view text) {
    std::vector<double> out;
    std::string buf(text);
    const char* p = buf.c_str();
    while (true) {
        while (*p != '\0' && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
        if (*p == '\0') break;
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p || !std::isfinite(v)) geometry_error(el, fmt::format("has an invalid number near '{}'", p));
        out.push_back(v);
        p = end;
    }
    return out;
}

double number_attribute(const xml::Element& el, std::string_view key, std::optional<double> fallback = {}) {
    const std::string* value = el.attribute(key);
    if (value == nullptr) {
        if (fallback) return *fallback;
        geometry_error(el, fmt::format("is missing attribute '{}'", key));
    }
    std::string text = trim(*value);
    if (text.size() > 2 && text.ends_with("px")) text.resize(text.size() - 2);
    const auto nums = parse_numbers(el, text);
    if (nums.size() != 1) geometry_error(el, fmt::format("attribute '{}' is not a number", key));
    return nums[0];
}

Affine parse_transform(const xml::Element& el, std::string_view text) {
    Affine total;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) ++pos;
        if (pos >= text.size()) break;
        const std::size_t open = text.find('(', pos);
        const std::size_t close = text.find(')', pos);
        if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
            geometry_error(el, "has a malformed transform");
        }
        const std::string name = trim(text.substr(pos, open - pos));
        const auto args = parse_numbers(el, text.substr(open + 1, close - open - 1));
        Affine t;
        if (name == "translate" && (args.size() == 1 || args.size() == 2)) {
            t.e = args[0];
            t.f = args.size() == 2 ? args[1] : 0.0;
        } else if (name == "scale" && (args.size() == 1 || args.size() == 2)) {
            t.a = args[0];
            t.d = args.size() == 2 ? args[1] : args[0];
        } else if (name == "matrix" && args.size() == 6) {
            t = {args[0], args[1], args[2], args[3], args[4], args[5]};
        } else {
            geometry_error(el, fmt::format("uses unsupported transform '{}'", name));
        }
        total = total.then(t);
        pos = close + 1;
    }
    return total;
}

std::vector<Point2> parse_point_list(const xml::Element& el, const Affine& tf) {
    const std::string* attr = el.attribute("points");
    if (attr == nullptr) geometry_error(el, "has no points");
    const auto nums = parse_numbers(el, *attr);
    if (nums.size() % 2 != 0) geometry_error(el, "has an odd number of coordinates");
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < nums.size(); i += 2) {
        pts.push_back(tf.apply({nums[i], nums[i + 1]}));
    }
    if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    return pts;
}

// Straight-line subset of the path grammar: M, L, H, V, Z in either case.
std::vector<Point2> parse_path(const xml::Element& el, const Affine& tf) {
    const std::string* attr = el.attribute("d");
    if (attr == nullptr) geometry_error(el, "has no path data");
    const std::string& d = *attr;
    std::vector<Point2> pts;
    Point2 cur;
    char cmd = 0;
    std::size_t i = 0;
    auto next_number = [&]() {
        while (i < d.size() && (std::isspace(static_cast<unsigned char>(d[i])) || d[i] == ',')) ++i;
        const char* begin = d.c_str() + i;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || !std::isfinite(v)) geometry_error(el, "has malformed path data");
        i += static_cast<std::size_t>(end - begin);
        return v;
    };
    bool closed = false;
    while (true) {
        while (i < d.size() && (std::isspace(static_cast<unsigned char>(d[i])) || d[i] == ',')) ++i;
        if (i >= d.size()) break;
        if (std::isalpha(static_cast<unsigned char>(d[i]))) {
            cmd = d[i++];
            if (cmd == 'Z' || cmd == 'z') {
                if (closed) geometry_error(el, "contains more than one subpath");
                closed = true;
                continue;
            }
        } else if (cmd == 0) {
            geometry_error(el, "path data does not start with a command");
        }
        if (closed) geometry_error(el, "contains more than one subpath");
        const bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
        switch (std::toupper(static_cast<unsigned char>(cmd))) {
            case 'M':
                if (!pts.empty()) geometry_error(el, "contains more than one subpath");
                [[fallthrough]];
            case 'L': {
                const double x = next_number();
                const double y = next_number();
                cur = rel ? Point2{cur.x + x, cur.y + y} : Point2{x, y};
                break;
            }
            case 'H': {
                const double x = next_number();
                cur.x = rel ? cur.x + x : x;
                break;
            }
            case 'V': {
                const double y = next_number();
                cur.y = rel ? cur.y + y : y;
                break;
            }
            default:
                geometry_error(el, fmt::format("uses unsupported path command '{}'", cmd));
        }
        pts.push_back(cur);
        // Implicit repeats after a moveto are linetos.
        if (cmd == 'M') cmd = 'L';
        if (cmd == 'm') cmd = 'l';
    }
    for (Point2& p : pts) p = tf.apply(p);
    if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
    return pts;
}

bool is_geometry_element(std::string_view name) {
    return name == "polygon" || name == "polyline" || name == "rect" || name == "circle" || name == "path" ||
           name == "ellipse" || name == "line";
}

// Scope resolution: Known(kind), Unknown (blocked by an unrecognized class) or None.
struct Scope {
    enum class State { None, Known, Blocked } state = State::None;
    ShapeKind kind = ShapeKind::Wall;
};

Scope resolve_scope(const xml::Element& el, const Scope& parent, const ShapeVocabulary& vocab) {
    const std::string* cls = el.attribute("class");
    if (cls == nullptr || trim(*cls).empty()) return parent;
    for (const auto& token : split(*cls, ' ')) {
        if (token.empty()) continue;
        if (auto kind = vocab.lookup(token)) return {Scope::State::Known, *kind};
    }
    return {Scope::State::Blocked, ShapeKind::Wall};
}

AnnotatedShape build_shape(const xml::Element& el, ShapeKind kind, const Affine& tf) {
    AnnotatedShape shape{kind, {}};
    if (el.name == "circle") {
        if (kind != ShapeKind::Column) geometry_error(el, "is a circle but only columns may be circular");
        Circle c{tf.apply({number_attribute(el, "cx", 0.0), number_attribute(el, "cy", 0.0)}),
                 number_attribute(el, "r") * tf.scale()};
        if (!(c.radius > 0)) geometry_error(el, "has a non-positive radius");
        shape.geometry = c;
        return shape;
    }
    std::vector<Point2> pts;
    if (el.name == "polygon" || el.name == "polyline") {
        pts = parse_point_list(el, tf);
    } else if (el.name == "rect") {
        const double x = number_attribute(el, "x", 0.0);
        const double y = number_attribute(el, "y", 0.0);
        const double w = number_attribute(el, "width");
        const double h = number_attribute(el, "height");
        if (!(w > 0 && h > 0)) geometry_error(el, "has a non-positive size");
        pts = {tf.apply({x, y}), tf.apply({x + w, y}), tf.apply({x + w, y + h}), tf.apply({x, y + h})};
    } else if (el.name == "path") {
        pts = parse_path(el, tf);
    } else {
        geometry_error(el, "is not a supported geometry element");
    }
    if (pts.size() < 3) geometry_error(el, "needs at least 3 points");
    if (!(std::abs(signed_area(pts)) > 0)) geometry_error(el, "has zero area");
    shape.geometry = std::move(pts);
    return shape;
}

void walk(const xml::Element& el, const Scope& parent_scope, const Affine& parent_tf,
          const ShapeVocabulary& vocab, AnnotationDocument& doc) {
    Affine tf = parent_tf;
    if (const std::string* t = el.attribute("transform")) tf = parent_tf.then(parse_transform(el, *t));
    const Scope scope = resolve_scope(el, parent_scope, vocab);
    if (is_geometry_element(el.name)) {
        if (scope.state == Scope::State::Known) {
            doc.shapes.push_back(build_shape(el, scope.kind, tf));
        } else {
            ++doc.skipped;
        }
    }
    for (const auto& child : el.children) walk(child, scope, tf, vocab, doc);
}

std::optional<int> dimension(const xml::Element& root, std::string_view key, int viewbox_index) {
    if (const std::string* v = root.attribute(key)) {
        std::string text = trim(*v);
        if (text.ends_with("px")) text.resize(text.size() - 2);
        char* end = nullptr;
        const double d = std::strtod(text.c_str(), &end);
        if (end != text.c_str() && *end == '\0' && d > 0 && std::isfinite(d)) {
            return static_cast<int>(std::ceil(d));
        }
    }
    if (const std::string* vb = root.attribute("viewBox")) {
        const auto nums = parse_numbers(root, *vb);
        if (nums.size() == 4 && nums[static_cast<std::size_t>(viewbox_index)] > 0) {
            return static_cast<int>(std::ceil(nums[static_cast<std::size_t>(viewbox_index)]));
        }
    }
    return std::nullopt;
}

}  // namespace

AnnotationDocument parse_annotation(std::string_view document, const ShapeVocabulary& vocabulary) {
    const xml::Element root = xml::parse(document);
    AnnotationDocument doc;
    walk(root, Scope{}, Affine{}, vocabulary, doc);
    doc.width = dimension(root, "width", 2);
    doc.height = dimension(root, "height", 3);
    return doc;
}

SegMask rasterize_annotations(std::span<const AnnotatedShape> shapes, int width, int height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::ZeroAreaCanvas, fmt::format("canvas {}x{} has no pixels", width, height));
    }
    // One layer per drawing order slot 1..5.
    std::array<BinaryMask, 6> layers;
    for (auto& layer : layers) layer = BinaryMask(width, height);
    for (const AnnotatedShape& shape : shapes) {
        BinaryMask& layer = layers[static_cast<std::size_t>(drawing_order(shape.kind))];
        if (const auto* pts = std::get_if<std::vector<Point2>>(&shape.geometry)) {
            fill_polygon(layer, *pts);
        } else {
            const Circle& c = std::get<Circle>(shape.geometry);
            fill_circle(layer, c.center, c.radius);
        }
    }
    const int window_slot = drawing_order(ShapeKind::Window);
    layers[static_cast<std::size_t>(window_slot)] = dilate3x3(layers[static_cast<std::size_t>(window_slot)]);

    const std::array<ClassId, 6> slot_class = {classes::kBackground, classes::kWall, classes::kStairs,
                                               classes::kRailing, classes::kDoor, classes::kWindow};
    SegMask mask(width, height);
    for (std::size_t slot = 1; slot < layers.size(); ++slot) {
        const BinaryMask& layer = layers[slot];
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (layer[i]) mask[i] = slot_class[slot];
        }
    }
    return mask;
}

}  // namespace planvec
