#include "planvec/reconstruct3d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "planvec/key_value.hpp"
#include "planvec/polygon_io.hpp"

namespace planvec {

HeightProfile HeightProfile::defaults() {
    HeightProfile p;
    p.level(classes::kWall) = {0.0, 2.5};
    p.level(classes::kGlassWall) = {0.0, 2.5};
    p.level(classes::kRailing) = {0.0, 1.1};
    p.level(classes::kDoor) = {0.0, 2.1};
    p.level(classes::kSlidingDoor) = {0.0, 2.1};
    p.level(classes::kWindow) = {0.9, 1.2};
    p.level(classes::kStairs) = {0.0, 3.0};
    return p;
}

HeightProfile HeightProfile::from_config(std::string_view text, HeightProfile base) {
    for (const auto& kv : parse_key_values(text)) {
        if (kv.key == "pixel_scale") {
            base.pixel_scale = parse_double(kv.value, kv.key);
            continue;
        }
        const std::size_t dot_pos = kv.key.rfind('.');
        if (dot_pos == std::string::npos) {
            throw Error(ErrorCode::Config, fmt::format("line {}: unknown profile key '{}'", kv.line, kv.key));
        }
        ClassId cls;
        try {
            cls = parse_class(kv.key.substr(0, dot_pos));
        } catch (const Error&) {
            throw Error(ErrorCode::Config, fmt::format("line {}: unknown class in '{}'", kv.line, kv.key));
        }
        const std::string field = kv.key.substr(dot_pos + 1);
        if (field == "base") {
            base.level(cls).base = parse_double(kv.value, kv.key);
        } else if (field == "height") {
            base.level(cls).height = parse_double(kv.value, kv.key);
        } else {
            throw Error(ErrorCode::Config, fmt::format("line {}: unknown profile field '{}'", kv.line, field));
        }
    }
    base.validate();
    return base;
}

void HeightProfile::validate() const {
    if (!(pixel_scale > 0) || !std::isfinite(pixel_scale)) {
        throw Error(ErrorCode::InvalidProfile, fmt::format("pixel_scale {} must be positive", pixel_scale));
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i].height >= 0) || !std::isfinite(levels[i].base)) {
            throw Error(ErrorCode::InvalidProfile,
                        fmt::format("class {} has an invalid level", class_info(ClassId(static_cast<int>(i))).name));
        }
    }
}

namespace {

bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
    // Closed triangle test for a positively oriented triangle.
    return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
}

}  // namespace

std::vector<std::array<std::size_t, 3>> triangulate(std::span<const Point2> polygon) {
    std::vector<std::array<std::size_t, 3>> tris;
    std::vector<std::size_t> idx(polygon.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    while (idx.size() > 3) {
        const std::size_t n = idx.size();
        std::size_t ear = n;
        double best_cross = -1.0;
        std::size_t best_convex = n;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = polygon[idx[(i + n - 1) % n]];
            const Point2 b = polygon[idx[i]];
            const Point2 c = polygon[idx[(i + 1) % n]];
            const double turn = cross(b - a, c - b);
            if (turn <= 0) continue;
            if (turn > best_cross) {
                best_cross = turn;
                best_convex = i;
            }
            bool blocked = false;
            for (std::size_t k = 0; k < n && !blocked; ++k) {
                if (k == i || k == (i + n - 1) % n || k == (i + 1) % n) continue;
                const Point2 p = polygon[idx[k]];
                if (p == a || p == b || p == c) continue;
                blocked = point_in_triangle(p, a, b, c);
            }
            if (!blocked) {
                ear = i;
                break;
            }
        }
        // Numerical corner cases: clip the most convex corner.
        if (ear == n) ear = best_convex == n ? 0 : best_convex;
        tris.push_back({idx[(ear + n - 1) % n], idx[ear], idx[(ear + 1) % n]});
        idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(ear));
    }
    if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

namespace {

std::vector<Point2> clean_ring(const std::vector<Point2>& in) {
    std::vector<Point2> v = in;
    v.erase(std::unique(v.begin(), v.end()), v.end());
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::size_t n = v.size();
            if (cross(v[i] - v[(i + n - 1) % n], v[(i + 1) % n] - v[i]) == 0) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return v;
}

}  // namespace

ExtrudeResult extrude(const PolygonSet& set, const HeightProfile& profile, const ExtrudeOptions& options) {
    profile.validate();
    ExtrudeResult result;
    Mesh& mesh = result.mesh;
    auto reject = [&](std::size_t index, ErrorCode code, std::string message) {
        if (options.strict) throw Error(code, fmt::format("polygon {}: {}", index, message));
        result.skipped.push_back({index, code, std::move(message)});
    };

    for (std::size_t pi = 0; pi < set.polygons.size(); ++pi) {
        const Polygon& poly = set.polygons[pi];
        if (poly.cls.is_background()) {
            reject(pi, ErrorCode::InvalidClassId, "polygon has no class");
            continue;
        }
        const Level level = profile.level(poly.cls);
        if (!(level.height > 0)) {
            reject(pi, ErrorCode::InvalidProfile, "class has zero extrusion height");
            continue;
        }
        std::vector<Point2> ring;
        for (const Point2& p : clean_ring(poly.vertices)) {
            ring.push_back({p.x * profile.pixel_scale, -p.y * profile.pixel_scale});
        }
        if (ring.size() < 3) {
            reject(pi, ErrorCode::SelfIntersectingPolygon, "polygon is degenerate");
            continue;
        }
        if (!is_simple_polygon(ring)) {
            reject(pi, ErrorCode::SelfIntersectingPolygon, "polygon is self-intersecting");
            continue;
        }
        if (signed_area(ring) < 0) std::reverse(ring.begin(), ring.end());

        const auto n = static_cast<std::uint32_t>(ring.size());
        const auto first = static_cast<std::uint32_t>(mesh.vertices.size());
        const double z0 = level.base;
        const double z1 = level.base + level.height;
        for (const Point2& p : ring) mesh.vertices.push_back({p.x, p.y, z0});
        for (const Point2& p : ring) mesh.vertices.push_back({p.x, p.y, z1});

        const std::size_t face_begin = mesh.faces.size();
        for (const auto& t : triangulate(ring)) {
            const auto a = static_cast<std::uint32_t>(t[0]);
            const auto b = static_cast<std::uint32_t>(t[1]);
            const auto c = static_cast<std::uint32_t>(t[2]);
            mesh.faces.push_back({first + c, first + b, first + a});
            mesh.faces.push_back({first + n + a, first + n + b, first + n + c});
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint32_t j = (i + 1) % n;
            mesh.faces.push_back({first + i, first + j, first + n + j});
            mesh.faces.push_back({first + i, first + n + j, first + n + i});
        }
        mesh.groups[poly.cls].emplace_back(face_begin, mesh.faces.size());
    }
    return result;
}

std::string export_obj(const Mesh& mesh) {
    std::string out = "# planvec mesh\n";
    for (const Vertex3& v : mesh.vertices) {
        out += fmt::format("v {} {} {}\n", format_fixed(v[0], 4), format_fixed(v[1], 4), format_fixed(v[2], 4));
    }
    for (const auto& [cls, ranges] : mesh.groups) {
        std::string name = class_info(cls).name;
        std::replace(name.begin(), name.end(), ' ', '_');
        out += fmt::format("g {}\n", name);
        for (const auto& [begin, end] : ranges) {
            for (std::size_t f = begin; f < end; ++f) {
                const Triangle& t = mesh.faces[f];
                out += fmt::format("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1);
            }
        }
    }
    return out;
}

Mesh read_obj(std::string_view text) {
    Mesh mesh;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool has_group = false;
    ClassId group;
    std::size_t group_begin = 0;
    auto close_group = [&] {
        if (has_group && mesh.faces.size() > group_begin) mesh.groups[group].emplace_back(group_begin, mesh.faces.size());
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vertex3 v{};
            if (!(fields >> v[0] >> v[1] >> v[2])) throw Error(ErrorCode::Parse, fmt::format("line {}: bad vertex", line_no));
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::uint32_t> idx;
            std::string token;
            while (fields >> token) {
                const long long i = parse_integer(token.substr(0, token.find('/')), "face index");
                const long long resolved = i < 0 ? static_cast<long long>(mesh.vertices.size()) + i : i - 1;
                if (resolved < 0 || resolved >= static_cast<long long>(mesh.vertices.size())) {
                    throw Error(ErrorCode::Parse, fmt::format("line {}: face index out of range", line_no));
                }
                idx.push_back(static_cast<std::uint32_t>(resolved));
            }
            if (idx.size() < 3) throw Error(ErrorCode::Parse, fmt::format("line {}: face with < 3 vertices", line_no));
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.faces.push_back({idx[0], idx[k], idx[k + 1]});
        } else if (tag == "g") {
            close_group();
            std::string name;
            fields >> name;
            std::replace(name.begin(), name.end(), '_', ' ');
            try {
                group = parse_class(name);
                has_group = true;
            } catch (const Error&) {
                has_group = false;
            }
            group_begin = mesh.faces.size();
        }
    }
    close_group();
    return mesh;
}

double mesh_volume(const Mesh& mesh) {
    double six_v = 0.0;
    for (const Triangle& t : mesh.faces) {
        const Vertex3& a = mesh.vertices[t[0]];
        const Vertex3& b = mesh.vertices[t[1]];
        const Vertex3& c = mesh.vertices[t[2]];
        six_v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                 a[2] * (b[0] * c[1] - b[1] * c[0]);
    }
    return six_v / 6.0;
}

}  // namespace planvec
