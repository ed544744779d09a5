#include "planvec/components.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace planvec {

namespace {

constexpr std::array<Pixel, 8> kNeighbors = {
    Pixel{1, 0}, Pixel{1, 1}, Pixel{0, 1}, Pixel{-1, 1}, Pixel{-1, 0}, Pixel{-1, -1}, Pixel{0, -1}, Pixel{1, -1}};

// Labels foreground cells of `occupied` (bounding-box local grid) and
// returns components with coordinates shifted back by (ox, oy).
std::vector<Component> label_grid(const BinaryMask& occupied, int ox, int oy) {
    std::vector<Component> out;
    Grid<std::uint8_t> seen(occupied.width(), occupied.height());
    std::vector<Pixel> stack;
    for (int y = 0; y < occupied.height(); ++y) {
        for (int x = 0; x < occupied.width(); ++x) {
            if (!occupied.at(x, y) || seen.at(x, y)) continue;
            Component comp;
            comp.label = static_cast<int>(out.size());
            seen.at(x, y) = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                comp.pixels.push_back({p.x + ox, p.y + oy});
                for (const Pixel& d : kNeighbors) {
                    const int nx = p.x + d.x;
                    const int ny = p.y + d.y;
                    if (occupied.contains(nx, ny) && occupied.at(nx, ny) && !seen.at(nx, ny)) {
                        seen.at(nx, ny) = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            std::sort(comp.pixels.begin(), comp.pixels.end());
            out.push_back(std::move(comp));
        }
    }
    return out;
}

}  // namespace

std::vector<Component> connected_components(const BinaryMask& mask) { return label_grid(mask, 0, 0); }

std::vector<Component> connected_components(std::span<const Pixel> pixels) {
    if (pixels.empty()) return {};
    int min_x = std::numeric_limits<int>::max();
    int min_y = min_x;
    int max_x = std::numeric_limits<int>::min();
    int max_y = max_x;
    for (const Pixel& p : pixels) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    BinaryMask local(max_x - min_x + 1, max_y - min_y + 1);
    for (const Pixel& p : pixels) local.at(p.x - min_x, p.y - min_y) = 1;
    return label_grid(local, min_x, min_y);
}

Contour trace_contour(const Component& component) {
    Contour contour;
    if (component.pixels.empty()) return contour;

    const auto [min_x_it, max_x_it] = std::minmax_element(
        component.pixels.begin(), component.pixels.end(), [](const Pixel& a, const Pixel& b) { return a.x < b.x; });
    const int ox = min_x_it->x;
    const int oy = component.pixels.front().y;
    const int h = component.pixels.back().y - oy + 1;
    const int w = max_x_it->x - ox + 1;
    BinaryMask local(w, h);
    for (const Pixel& p : component.pixels) local.at(p.x - ox, p.y - oy) = 1;
    auto inside = [&](Pixel p) { return local.contains(p.x - ox, p.y - oy) && local.at(p.x - ox, p.y - oy); };
    auto direction_of = [](Pixel from, Pixel to) {
        const Pixel d{to.x - from.x, to.y - from.y};
        for (std::size_t i = 0; i < kNeighbors.size(); ++i) {
            if (kNeighbors[i] == d) return static_cast<int>(i);
        }
        return 0;
    };
    // Scans the neighbors of p clockwise, starting just after the backtrack
    // cell. Returns false when p has no foreground neighbor.
    auto step = [&](Pixel p, Pixel backtrack, Pixel& next, Pixel& next_backtrack) {
        const int d0 = direction_of(p, backtrack);
        for (int k = 1; k <= 8; ++k) {
            const int d = (d0 + k) % 8;
            const Pixel q{p.x + kNeighbors[static_cast<std::size_t>(d)].x,
                          p.y + kNeighbors[static_cast<std::size_t>(d)].y};
            if (inside(q)) {
                const int prev = (d + 7) % 8;
                next = q;
                next_backtrack = {p.x + kNeighbors[static_cast<std::size_t>(prev)].x,
                                  p.y + kNeighbors[static_cast<std::size_t>(prev)].y};
                return true;
            }
        }
        return false;
    };

    const Pixel start = component.pixels.front();
    contour.points.push_back(start);
    Pixel next;
    Pixel backtrack;
    if (!step(start, {start.x - 1, start.y}, next, backtrack)) return contour;
    const Pixel second = next;
    const std::size_t limit = 4 * component.pixels.size() + 8;
    while (contour.points.size() <= limit) {
        const Pixel p = next;
        step(p, backtrack, next, backtrack);
        if (p == start && next == second) break;
        contour.points.push_back(p);
    }
    return contour;
}

}  // namespace planvec
