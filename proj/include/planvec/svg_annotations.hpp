#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "planvec/geometry.hpp"
#include "planvec/mask_io.hpp"

namespace planvec {

enum class ShapeKind { Stairs, Railing, Wall, Window, Door, Column };

std::string_view to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view name);

/// Compositing priority: Wall (and Column) 1, Stairs 2, Railing 3, Door 4,
/// Window 5. Higher values overwrite lower ones.
int drawing_order(ShapeKind kind);

/// Mask class a shape kind rasterizes into. Columns become walls.
ClassId shape_class(ShapeKind kind);

struct Circle {
    Point2 center;
    double radius = 0.0;
};

using ShapeGeometry = std::variant<std::vector<Point2>, Circle>;

struct AnnotatedShape {
    ShapeKind kind = ShapeKind::Wall;
    ShapeGeometry geometry;
};

/// Maps class-attribute tokens to shape kinds.
class ShapeVocabulary {
public:
    /// Stairs, Railing, Wall, Window, Door and Column mapped to themselves.
    static ShapeVocabulary defaults();

    /// Builds a vocabulary from `token=Kind` lines.
    static ShapeVocabulary from_config(std::string_view text);

    void set(std::string token, ShapeKind kind) { map_[std::move(token)] = kind; }
    std::optional<ShapeKind> lookup(std::string_view token) const;

private:
    std::map<std::string, ShapeKind, std::less<>> map_;
};

struct AnnotationDocument {
    std::vector<AnnotatedShape> shapes;
    /// Geometry elements that did not resolve to a known shape kind.
    int skipped = 0;
    /// Canvas size from the root width/height or viewBox, when present.
    std::optional<int> width;
    std::optional<int> height;
};

/// Reads a CubiCasa-style annotation document. A geometry element takes its
/// kind from its own class attribute or from the nearest ancestor carrying
/// one; an ancestor with an unrecognized class hides everything below it.
AnnotationDocument parse_annotation(std::string_view document,
                                    const ShapeVocabulary& vocabulary = ShapeVocabulary::defaults());

/// Composites shapes into a mask: windows are dilated by a 3x3 window,
/// columns merge into walls, and layers are drawn in ascending drawing order.
SegMask rasterize_annotations(std::span<const AnnotatedShape> shapes, int width, int height);

}  // namespace planvec
