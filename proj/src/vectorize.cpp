#include "planvec/vectorize.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "planvec/kdtree.hpp"
#include "planvec/raster.hpp"

namespace planvec {

std::array<Point2, 4> RotatedRect::corners() const {
    const Point2 u = axis_long() * (width / 2);
    const Point2 v = axis_short() * (height / 2);
    return {center - u - v, center + u - v, center + u + v, center - u + v};
}

bool RotatedRect::contains_pixel(int x, int y) const {
    const Point2 d = Point2{x + 0.5, y + 0.5} - center;
    const double u = dot(d, axis_long());
    const double v = dot(d, axis_short());
    return -width / 2 <= u && u < width / 2 && -height / 2 <= v && v < height / 2;
}

void Thresholds::validate() const {
    if (!(eps_u > 0 && eps_u <= 1)) {
        throw Error(ErrorCode::InvalidThreshold, fmt::format("eps_u {} outside (0, 1]", eps_u));
    }
    if (!(eps_d >= 0) || !std::isfinite(eps_d)) {
        throw Error(ErrorCode::InvalidThreshold, fmt::format("eps_d {} is negative", eps_d));
    }
    if (!(eps_a >= 0 && eps_a <= 1)) {
        throw Error(ErrorCode::InvalidThreshold, fmt::format("eps_a {} outside [0, 1]", eps_a));
    }
}

namespace {

double normalize_angle(double a) {
    a = std::fmod(a, std::numbers::pi);
    if (a < 0) a += std::numbers::pi;
    if (a >= std::numbers::pi - 1e-12) a = 0.0;
    return a;
}

RotatedRect rect_from_extents(Point2 e, Point2 n, double min_e, double max_e, double min_n, double max_n) {
    RotatedRect r;
    const double w = max_e - min_e;
    const double h = max_n - min_n;
    r.center = e * ((min_e + max_e) / 2) + n * ((min_n + max_n) / 2);
    if (w >= h) {
        r.width = w;
        r.height = h;
        r.angle = normalize_angle(std::atan2(e.y, e.x));
    } else {
        r.width = h;
        r.height = w;
        r.angle = normalize_angle(std::atan2(n.y, n.x));
    }
    return r;
}

}  // namespace

RotatedRect min_area_rect(std::span<const Point2> points) {
    if (points.empty()) {
        throw Error(ErrorCode::EmptyPointSet, "min_area_rect needs at least one point");
    }
    const std::vector<Point2> hull = convex_hull({points.begin(), points.end()});
    if (hull.size() == 1) {
        return RotatedRect{hull[0], 0.0, 0.0, 0.0};
    }
    if (hull.size() == 2) {
        const Point2 d = hull[1] - hull[0];
        return RotatedRect{(hull[0] + hull[1]) * 0.5, norm(d), 0.0, normalize_angle(std::atan2(d.y, d.x))};
    }

    const std::size_t n = hull.size();
    auto next = [n](std::size_t i) { return (i + 1) % n; };
    auto edge_dir = [&](std::size_t i) {
        const Point2 d = hull[next(i)] - hull[i];
        return d * (1.0 / norm(d));
    };

    // Caliper pointers: farthest along the edge, farthest from the edge,
    // and farthest against the edge direction.
    Point2 e = edge_dir(0);
    Point2 nrm{-e.y, e.x};
    std::size_t far_e = 0;
    std::size_t far_n = 0;
    std::size_t near_e = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (dot(hull[k], e) > dot(hull[far_e], e)) far_e = k;
        if (dot(hull[k], nrm) > dot(hull[far_n], nrm)) far_n = k;
        if (dot(hull[k], e) < dot(hull[near_e], e)) near_e = k;
    }

    double best_area = std::numeric_limits<double>::infinity();
    RotatedRect best;
    for (std::size_t i = 0; i < n; ++i) {
        e = edge_dir(i);
        nrm = {-e.y, e.x};
        for (std::size_t s = 0; s < n && dot(hull[next(far_e)], e) >= dot(hull[far_e], e); ++s) far_e = next(far_e);
        for (std::size_t s = 0; s < n && dot(hull[next(far_n)], nrm) >= dot(hull[far_n], nrm); ++s) {
            far_n = next(far_n);
        }
        for (std::size_t s = 0; s < n && dot(hull[next(near_e)], e) <= dot(hull[near_e], e); ++s) {
            near_e = next(near_e);
        }
        const double min_e = dot(hull[near_e], e);
        const double max_e = dot(hull[far_e], e);
        const double min_n = dot(hull[i], nrm);
        const double max_n = dot(hull[far_n], nrm);
        const double area = (max_e - min_e) * (max_n - min_n);
        if (i == 0 || area < best_area - 1e-9 * std::max(1.0, best_area)) {
            best_area = area;
            best = rect_from_extents(e, nrm, min_e, max_e, min_n, max_n);
        }
    }
    return best;
}

std::vector<Point2> pixel_corners(std::span<const Pixel> pixels) {
    std::map<int, std::pair<int, int>> rows;
    for (const Pixel& p : pixels) {
        auto [it, inserted] = rows.try_emplace(p.y, p.x, p.x);
        if (!inserted) {
            it->second.first = std::min(it->second.first, p.x);
            it->second.second = std::max(it->second.second, p.x);
        }
    }
    std::vector<Point2> out;
    out.reserve(rows.size() * 4);
    for (const auto& [y, span] : rows) {
        const double yd = y;
        out.push_back({static_cast<double>(span.first), yd});
        out.push_back({static_cast<double>(span.first), yd + 1});
        out.push_back({static_cast<double>(span.second + 1), yd});
        out.push_back({static_cast<double>(span.second + 1), yd + 1});
    }
    return out;
}

double fitting_score(const BinaryMask& mask, const RotatedRect& rect) {
    if (!(rect.area() > 0)) {
        throw Error(ErrorCode::ZeroAreaRect, "fitting score of a zero-area rectangle");
    }
    const auto corners = rect.corners();
    double min_x = corners[0].x, max_x = corners[0].x, min_y = corners[0].y, max_y = corners[0].y;
    for (const Point2& c : corners) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(max_x - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(max_y - 0.5)));
    long long covered = 0;
    long long ones = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (!rect.contains_pixel(x, y)) continue;
            ++covered;
            if (mask.at(x, y)) ++ones;
        }
    }
    return covered == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(covered);
}

std::pair<Component, Component> split_component(const Component& component, const RotatedRect& rect) {
    if (component.pixels.size() < 2) {
        throw Error(ErrorCode::DegenerateSplit, "cannot split a component with fewer than 2 pixels");
    }
    const Point2 axis = rect.axis_long();
    auto along = [&](const Pixel& p) { return dot(Point2{p.x + 0.5, p.y + 0.5} - rect.center, axis); };

    Component first{component.label, {}};
    Component second{component.label, {}};
    for (const Pixel& p : component.pixels) {
        (along(p) <= 0 ? first : second).pixels.push_back(p);
    }
    if (!first.pixels.empty() && !second.pixels.empty()) return {std::move(first), std::move(second)};

    std::vector<Pixel> sorted = component.pixels;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Pixel& a, const Pixel& b) { return along(a) < along(b); });
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    first.pixels.assign(sorted.begin(), mid);
    second.pixels.assign(mid, sorted.end());
    std::sort(first.pixels.begin(), first.pixels.end());
    std::sort(second.pixels.begin(), second.pixels.end());
    return {std::move(first), std::move(second)};
}

namespace {

constexpr std::size_t kMinSplitPixels = 4;

Polygon rect_polygon(const RotatedRect& rect, bool fallback) {
    const auto c = rect.corners();
    return Polygon{{c.begin(), c.end()}, classes::kBackground, fallback};
}

std::vector<Polygon> approximate_component(const BinaryMask& joint, Component initial, double eps_u) {
    std::vector<Polygon> out;
    std::deque<Component> work;
    work.push_back(std::move(initial));
    while (!work.empty()) {
        Component comp = std::move(work.front());
        work.pop_front();
        const std::vector<Point2> corners = pixel_corners(comp.pixels);
        const RotatedRect rect = min_area_rect(corners);
        if (comp.pixels.size() <= kMinSplitPixels || rect.height < 1.0) {
            out.push_back(rect_polygon(rect, true));
            continue;
        }
        if (fitting_score(joint, rect) >= eps_u) {
            out.push_back(rect_polygon(rect, false));
            continue;
        }
        auto [a, b] = split_component(comp, rect);
        for (Component* half : {&a, &b}) {
            for (Component& part : connected_components(half->pixels)) work.push_back(std::move(part));
        }
    }
    return out;
}

}  // namespace

PolygonSet approximate_polygons(const BinaryMask& joint, double eps_u, const ApproximationOptions& options) {
    if (!(eps_u > 0 && eps_u <= 1)) {
        throw Error(ErrorCode::InvalidThreshold, fmt::format("eps_u {} outside (0, 1]", eps_u));
    }
    std::vector<Component> comps = connected_components(joint);
    std::vector<std::vector<Polygon>> results(comps.size());
    if (options.threads <= 1 || comps.size() < 2) {
        for (std::size_t i = 0; i < comps.size(); ++i) results[i] = approximate_component(joint, std::move(comps[i]), eps_u);
    } else {
        // Strided assignment; results land in their component's slot.
        std::vector<std::future<void>> tasks;
        const std::size_t workers = std::min<std::size_t>(options.threads, comps.size());
        for (std::size_t w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < comps.size(); i += workers) {
                    results[i] = approximate_component(joint, std::move(comps[i]), eps_u);
                }
            }));
        }
        for (auto& t : tasks) t.get();
    }
    PolygonSet set;
    for (auto& r : results) {
        for (auto& p : r) set.polygons.push_back(std::move(p));
    }
    return set;
}

namespace {

void drop_consecutive_duplicates(std::vector<Point2>& v) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
}

// Pairwise midpoint merging of cross-polygon vertices. Coincident vertices
// move together, so every merge removes at least one distinct position.
void merge_vertices(std::vector<Polygon>& polys, double eps_d) {
    while (true) {
        std::map<Point2, std::vector<std::size_t>> owners;
        for (std::size_t p = 0; p < polys.size(); ++p) {
            for (const Point2& v : polys[p].vertices) owners[v].push_back(p);
        }
        std::vector<Point2> positions;
        std::vector<std::vector<std::size_t>> position_owners;
        for (auto& [pos, list] : owners) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
            positions.push_back(pos);
            position_owners.push_back(list);
        }
        const KdTree tree(positions);

        struct Candidate {
            double dist;
            std::size_t a;
            std::size_t b;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < positions.size(); ++i) {
            for (std::size_t j : tree.radius_search(positions[i], eps_d)) {
                if (j <= i) continue;
                const auto& oi = position_owners[i];
                const auto& oj = position_owners[j];
                const bool same_single = oi.size() == 1 && oj.size() == 1 && oi[0] == oj[0];
                if (same_single) continue;
                candidates.push_back({distance(positions[i], positions[j]), i, j});
            }
        }
        if (candidates.empty()) return;
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
            return std::tie(x.dist, x.a, x.b) < std::tie(y.dist, y.a, y.b);
        });

        std::vector<bool> used(positions.size(), false);
        std::map<Point2, Point2> moves;
        for (const Candidate& c : candidates) {
            if (used[c.a] || used[c.b]) continue;
            used[c.a] = used[c.b] = true;
            const Point2 mid = (positions[c.a] + positions[c.b]) * 0.5;
            moves[positions[c.a]] = mid;
            moves[positions[c.b]] = mid;
        }
        for (Polygon& poly : polys) {
            for (Point2& v : poly.vertices) {
                if (auto it = moves.find(v); it != moves.end()) v = it->second;
            }
        }
    }
}

void remove_collinear(std::vector<Point2>& v, double eps_a) {
    drop_consecutive_duplicates(v);
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        const std::size_t n = v.size();
        for (std::size_t j = 0; j < n; ++j) {
            const Point2 a = v[(j + n - 1) % n];
            const Point2 b = v[j];
            const Point2 c = v[(j + 1) % n];
            const Point2 e1 = b - a;
            const Point2 e2 = c - b;
            const double l1 = norm(e1);
            const double l2 = norm(e2);
            const bool degenerate = l1 == 0 || l2 == 0;
            if (degenerate || std::abs(dot(e1, e2)) / (l1 * l2) >= eps_a) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
                break;
            }
        }
    }
}

}  // namespace

PolygonSet refine_polygons(const PolygonSet& set, double eps_d, double eps_a) {
    Thresholds{0.5, eps_d, eps_a}.validate();
    std::vector<Polygon> polys = set.polygons;
    merge_vertices(polys, eps_d);

    PolygonSet out;
    for (Polygon& poly : polys) {
        remove_collinear(poly.vertices, eps_a);
        if (poly.vertices.size() < 3) continue;
        if (signed_area(poly.vertices) < 0) std::reverse(poly.vertices.begin(), poly.vertices.end());
        out.polygons.push_back(std::move(poly));
    }
    return out;
}

PolygonSet assign_classes(const PolygonSet& set, const SegMask& mask) {
    PolygonSet out;
    for (const Polygon& poly : set.polygons) {
        std::array<long long, ClassId::kCount> counts{};
        for_each_pixel_in_polygon(mask.width(), mask.height(), poly.vertices,
                                  [&](int x, int y) { ++counts[static_cast<std::size_t>(mask.at(x, y).value())]; });
        std::size_t best = 0;
        for (std::size_t c = 1; c < counts.size(); ++c) {
            if (counts[c] > 0 && (best == 0 || counts[c] > counts[best])) best = c;
        }
        if (best == 0) continue;
        Polygon tagged = poly;
        tagged.cls = ClassId(static_cast<int>(best));
        out.polygons.push_back(std::move(tagged));
    }
    return out;
}

PolygonSet vectorize_mask(const SegMask& mask, const Thresholds& thresholds, const ApproximationOptions& options) {
    thresholds.validate();
    const PolygonSet approx = approximate_polygons(joint_mask(mask), thresholds.eps_u, options);
    return refine_polygons(assign_classes(approx, mask), thresholds.eps_d, thresholds.eps_a);
}

SegMask rasterize_polygons(const PolygonSet& set, int width, int height) {
    SegMask out(width, height);
    for (const Polygon& poly : set.polygons) {
        const ClassId cls = poly.cls.is_background() ? classes::kWall : poly.cls;
        for_each_pixel_in_polygon(width, height, poly.vertices, [&](int x, int y) { out.at(x, y) = cls; });
    }
    return out;
}

}  // namespace planvec
