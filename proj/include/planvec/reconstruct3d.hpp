#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planvec/vectorize.hpp"

namespace planvec {

struct Level {
    double base = 0.0;    // meters
    double height = 0.0;  // meters
};

/// Per-class base elevation and extrusion height plus the pixel size.
struct HeightProfile {
    std::array<Level, ClassId::kCount> levels{};
    double pixel_scale = 0.01;  // meters per pixel

    static HeightProfile defaults();

    /// Applies `pixel_scale`, `<class>.base` and `<class>.height` keys on
    /// top of `base`. Class keys use slugs such as `glass_wall`.
    static HeightProfile from_config(std::string_view text, HeightProfile base = defaults());

    const Level& level(ClassId id) const { return levels[static_cast<std::size_t>(id.value())]; }
    Level& level(ClassId id) { return levels[static_cast<std::size_t>(id.value())]; }

    /// Throws InvalidProfile for negative heights or a non-positive scale.
    void validate() const;
};

using Vertex3 = std::array<double, 3>;
using Triangle = std::array<std::uint32_t, 3>;

struct Mesh {
    std::vector<Vertex3> vertices;
    std::vector<Triangle> faces;
    /// Face-index ranges [first, second) belonging to each class.
    std::map<ClassId, std::vector<std::pair<std::size_t, std::size_t>>> groups;
};

struct ExtrudeIssue {
    std::size_t polygon_index = 0;
    ErrorCode code = ErrorCode::SelfIntersectingPolygon;
    std::string message;
};

struct ExtrudeResult {
    Mesh mesh;
    std::vector<ExtrudeIssue> skipped;
};

struct ExtrudeOptions {
    /// Throw on the first bad polygon instead of skipping it.
    bool strict = false;
};

/// Ear-clipping triangulation of a simple polygon with positive signed
/// area. Returns n - 2 index triples, each with positive orientation.
std::vector<std::array<std::size_t, 3>> triangulate(std::span<const Point2> polygon);

/// Turns every polygon into a closed prism. Image y is flipped so the
/// world frame is y-up; caps are ear-clipped, walls are two triangles per
/// edge, and all faces point outwards.
ExtrudeResult extrude(const PolygonSet& set, const HeightProfile& profile, const ExtrudeOptions& options = {});

/// Wavefront OBJ text: vertex lines with 4 decimals, one `g` group per
/// class, 1-based faces, LF endings.
std::string export_obj(const Mesh& mesh);

/// Reads `v`, `f` and `g` records of an OBJ document.
Mesh read_obj(std::string_view text);

/// Signed volume by the divergence theorem; positive for outward faces.
double mesh_volume(const Mesh& mesh);

}  // namespace planvec
