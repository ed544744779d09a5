#pragma once

#include <cstdint>
#include <span>

#include "planvec/geometry.hpp"
#include "planvec/mask_io.hpp"

namespace planvec {

/// Sets every pixel whose center (x + 0.5, y + 0.5) lies inside the polygon
/// under the even-odd rule. Geometry outside the canvas is clipped.
void fill_polygon(BinaryMask& mask, std::span<const Point2> polygon, std::uint8_t value = 1);

/// Sets every pixel whose center lies within `radius` of `center`.
void fill_circle(BinaryMask& mask, Point2 center, double radius, std::uint8_t value = 1);

/// Binary dilation with a 3x3 square structuring element.
BinaryMask dilate3x3(const BinaryMask& mask);

/// Calls fn(x, y) for each pixel center inside the polygon, row by row.
template <typename Fn>
void for_each_pixel_in_polygon(int width, int height, std::span<const Point2> polygon, Fn&& fn);

}  // namespace planvec

#include "planvec/raster_impl.hpp"
