#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "planvec/components.hpp"
#include "planvec/geometry.hpp"
#include "planvec/mask_io.hpp"

namespace planvec {

/// Oriented rectangle. `width` runs along `angle` and is the longer side.
struct RotatedRect {
    Point2 center;
    double width = 0.0;
    double height = 0.0;
    double angle = 0.0;  // radians, [0, pi)

    Point2 axis_long() const { return {std::cos(angle), std::sin(angle)}; }
    Point2 axis_short() const { return {-std::sin(angle), std::cos(angle)}; }
    double area() const { return width * height; }

    /// Corners with positive signed area.
    std::array<Point2, 4> corners() const;

    /// Pixel-center membership, half-open on the far long and far short
    /// edges so that abutting rectangles never share a pixel.
    bool contains_pixel(int x, int y) const;
};

struct Polygon {
    std::vector<Point2> vertices;
    ClassId cls;  // background means unassigned
    /// Emitted by the minimum-size guard rather than by passing the score.
    bool fallback = false;
};

struct PolygonSet {
    std::vector<Polygon> polygons;
};

struct Thresholds {
    double eps_u = 0.5;
    double eps_d = 4.0;
    double eps_a = std::cos(14.0 * std::numbers::pi / 180.0);

    /// Throws InvalidThreshold when a value is outside its range.
    void validate() const;
};

/// Minimum-area enclosing rectangle via rotating calipers over the hull.
RotatedRect min_area_rect(std::span<const Point2> points);

/// Corners of every pixel square in the set, reduced to row extremes.
std::vector<Point2> pixel_corners(std::span<const Pixel> pixels);

/// Fraction of pixels with centers inside `rect` that are set in `mask`.
/// Zero when no pixel center falls inside.
double fitting_score(const BinaryMask& mask, const RotatedRect& rect);

/// Bisects `rect` perpendicular to its long axis and partitions the pixels
/// by side (pixels on the line go first). When a side would be empty the
/// split falls back to the population median along the long axis.
std::pair<Component, Component> split_component(const Component& component, const RotatedRect& rect);

struct ApproximationOptions {
    /// Worker threads across initial components; 0 or 1 runs inline.
    unsigned threads = 1;
};

/// Iteratively fits minimum-area rectangles to connected components,
/// splitting components whose rectangle scores below eps_u. Polygons are
/// emitted per initial component in label order.
PolygonSet approximate_polygons(const BinaryMask& joint, double eps_u, const ApproximationOptions& options = {});

/// Cross-polygon vertex merging within eps_d, then removal of vertices
/// whose adjacent edges satisfy |cos| >= eps_a.
PolygonSet refine_polygons(const PolygonSet& set, double eps_d, double eps_a);

/// Majority non-background class under each polygon; ties go to the lower
/// id. Polygons covering no foreground pixel are dropped.
PolygonSet assign_classes(const PolygonSet& set, const SegMask& mask);

/// Joint mask, approximation, class assignment and refinement.
PolygonSet vectorize_mask(const SegMask& mask, const Thresholds& thresholds = {},
                          const ApproximationOptions& options = {});

/// Rasterizes polygons back to a mask in set order (later polygons win).
SegMask rasterize_polygons(const PolygonSet& set, int width, int height);

}  // namespace planvec
