#pragma once

#include <string>
#include <string_view>

#include "planvec/vectorize.hpp"

namespace planvec {

/// Fixed-point formatting that never prints a negative zero.
std::string format_fixed(double value, int decimals);

/// One polygon per line: `class_id n x1 y1 ... xn yn`, 2 decimals, LF.
std::string write_polygons_text(const PolygonSet& set);
PolygonSet read_polygons_text(std::string_view text);

/// Feature collection with one closed polygon ring per feature and the
/// class id and name as properties.
std::string write_polygons_geojson(const PolygonSet& set);

}  // namespace planvec
