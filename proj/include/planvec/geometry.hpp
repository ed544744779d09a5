#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace planvec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
    friend auto operator<=>(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double squared_distance(Point2 a, Point2 b) {
    const Point2 d = a - b;
    return dot(d, d);
}

/// Shoelace area; positive when vertices run counter-clockwise in a
/// y-up frame (x_i * y_{i+1} - x_{i+1} * y_i summed).
double signed_area(std::span<const Point2> polygon);

/// Even-odd point containment.
bool contains_even_odd(std::span<const Point2> polygon, Point2 p);

/// Convex hull by monotone chain. Collinear boundary points are dropped;
/// the result is in positive (counter-clockwise) order. Degenerate inputs
/// return one or two points.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Proper or touching intersection of segments ab and cd.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// True when no two non-adjacent edges of the closed polygon intersect
/// and no two adjacent edges overlap.
bool is_simple_polygon(std::span<const Point2> polygon);

}  // namespace planvec
