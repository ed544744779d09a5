#include "planvec/kdtree.hpp"

#include <algorithm>

namespace planvec {

namespace {
constexpr std::uint32_t kLeafSize = 8;

double coord(Point2 p, int axis) { return axis == 0 ? p.x : p.y; }
}  // namespace

KdTree::KdTree(std::span<const Point2> points) : points_(points.begin(), points.end()), order_(points.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!points_.empty()) build(0, static_cast<std::uint32_t>(order_.size()), 0);
}

int KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1, depth % 2, 0.0});
    if (end - begin <= kLeafSize) return index;
    const int axis = depth % 2;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) { return coord(points_[a], axis) < coord(points_[b], axis); });
    nodes_[static_cast<std::size_t>(index)].split = coord(points_[order_[mid]], axis);
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    nodes_[static_cast<std::size_t>(index)].left = left;
    nodes_[static_cast<std::size_t>(index)].right = right;
    return index;
}

void KdTree::search(int node_index, Point2 query, double r2, std::vector<std::size_t>& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_index)];
    if (node.left < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (squared_distance(points_[order_[i]], query) <= r2) out.push_back(order_[i]);
        }
        return;
    }
    // Left holds coordinates <= split, right holds coordinates >= split.
    const double delta = coord(query, node.axis) - node.split;
    if (delta <= 0 || delta * delta <= r2) search(node.left, query, r2, out);
    if (delta >= 0 || delta * delta <= r2) search(node.right, query, r2, out);
}

std::vector<std::size_t> KdTree::radius_search(Point2 query, double radius) const {
    std::vector<std::size_t> out;
    if (nodes_.empty() || radius < 0) return out;
    search(0, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace planvec
