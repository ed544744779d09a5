#include "planvec/polygon_io.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "planvec/key_value.hpp"

namespace planvec {

std::string format_fixed(double value, int decimals) {
    std::string s = fmt::format("{:.{}f}", value, decimals);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string write_polygons_text(const PolygonSet& set) {
    std::string out;
    for (const Polygon& poly : set.polygons) {
        out += fmt::format("{} {}", poly.cls.value(), poly.vertices.size());
        for (const Point2& v : poly.vertices) {
            out += ' ';
            out += format_fixed(v.x, 2);
            out += ' ';
            out += format_fixed(v.y, 2);
        }
        out += '\n';
    }
    return out;
}

PolygonSet read_polygons_text(std::string_view text) {
    PolygonSet set;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream fields(t);
        int cls = 0;
        long long n = 0;
        if (!(fields >> cls >> n) || n < 0) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: expected 'class_id n' header", line_no));
        }
        Polygon poly;
        try {
            poly.cls = ClassId(cls);
        } catch (const Error&) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: invalid class id {}", line_no, cls));
        }
        for (long long i = 0; i < n; ++i) {
            Point2 p;
            if (!(fields >> p.x >> p.y) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw Error(ErrorCode::Parse, fmt::format("line {}: expected {} coordinate pairs", line_no, n));
            }
            poly.vertices.push_back(p);
        }
        std::string extra;
        if (fields >> extra) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: trailing data '{}'", line_no, extra));
        }
        set.polygons.push_back(std::move(poly));
    }
    return set;
}

std::string write_polygons_geojson(const PolygonSet& set) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const Polygon& poly : set.polygons) {
        nlohmann::ordered_json ring = nlohmann::ordered_json::array();
        for (const Point2& v : poly.vertices) ring.push_back({v.x, v.y});
        if (!poly.vertices.empty()) ring.push_back({poly.vertices.front().x, poly.vertices.front().y});
        features.push_back({
            {"type", "Feature"},
            {"properties", {{"class_id", poly.cls.value()}, {"class", class_info(poly.cls).name}}},
            {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::ordered_json::array({ring})}}},
        });
    }
    nlohmann::ordered_json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump(2) + "\n";
}

}  // namespace planvec
