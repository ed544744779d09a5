#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace planvec {

template <typename Fn>
void for_each_pixel_in_polygon(int width, int height, std::span<const Point2> polygon, Fn&& fn) {
    const std::size_t n = polygon.size();
    if (n < 3 || width <= 0 || height <= 0) return;
    double min_y = polygon[0].y;
    double max_y = polygon[0].y;
    for (const Point2& p : polygon) {
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int y0 = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(max_y - 0.5)));
    std::vector<double> xs;
    for (int y = y0; y <= y1; ++y) {
        const double yc = y + 0.5;
        xs.clear();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point2 a = polygon[j];
            const Point2 b = polygon[i];
            if ((a.y <= yc) != (b.y <= yc)) {
                xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Pixel x is inside when xs[k] <= x + 0.5 < xs[k + 1].
            const int first = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
            const int last = std::min(width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
            for (int x = first; x <= last; ++x) {
                fn(x, y);
            }
        }
    }
}

}  // namespace planvec
