#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "planvec/geometry.hpp"

namespace planvec {

/// Static 2D KD-tree over a point array. Queries return indices into the
/// array the tree was built from.
class KdTree {
public:
    explicit KdTree(std::span<const Point2> points);

    /// Indices of all points within `radius` (inclusive) of `query`, ascending.
    std::vector<std::size_t> radius_search(Point2 query, double radius) const;

    std::size_t size() const noexcept { return points_.size(); }

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        int axis = 0;
        double split = 0.0;
    };

    int build(std::uint32_t begin, std::uint32_t end, int depth);
    void search(int node, Point2 query, double r2, std::vector<std::size_t>& out) const;

    std::vector<Point2> points_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace planvec
