#pragma once

#include <compare>
#include <span>
#include <vector>

#include "planvec/mask_io.hpp"

namespace planvec {

/// Integer pixel coordinate. Ordered row-major: by y, then x.
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend std::strong_ordering operator<=>(const Pixel& a, const Pixel& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

/// A maximal 8-connected set of foreground pixels, stored row-major.
struct Component {
    int label = 0;
    std::vector<Pixel> pixels;
};

/// Ordered, closed outer boundary of a component. Consecutive points are
/// 8-neighbors; the last point connects back to the first. Pixels on
/// one-pixel-wide parts can appear more than once.
struct Contour {
    std::vector<Pixel> points;
};

/// 8-connected labeling. Components are numbered from 0 in the row-major
/// order of their first pixel.
std::vector<Component> connected_components(const BinaryMask& mask);

/// Splits an arbitrary pixel set into its 8-connected parts, in the same
/// deterministic order as connected_components.
std::vector<Component> connected_components(std::span<const Pixel> pixels);

/// Moore-neighbor tracing of the outer contour, clockwise on screen,
/// starting at the component's first row-major pixel.
Contour trace_contour(const Component& component);

}  // namespace planvec
