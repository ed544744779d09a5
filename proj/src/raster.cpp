#include "planvec/raster.hpp"

namespace planvec {

void fill_polygon(BinaryMask& mask, std::span<const Point2> polygon, std::uint8_t value) {
    for_each_pixel_in_polygon(mask.width(), mask.height(), polygon,
                              [&](int x, int y) { mask.at(x, y) = value; });
}

void fill_circle(BinaryMask& mask, Point2 center, double radius, std::uint8_t value) {
    if (!(radius > 0)) return;
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius - 0.5)));
    const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(center.y + radius - 0.5)));
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius - 0.5)));
    const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(center.x + radius - 0.5)));
    const double r2 = radius * radius;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x + 0.5 - center.x;
            const double dy = y + 0.5 - center.y;
            if (dx * dx + dy * dy <= r2) mask.at(x, y) = value;
        }
    }
}

BinaryMask dilate3x3(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (mask.contains(x + dx, y + dy)) out.at(x + dx, y + dy) = 1;
                }
            }
        }
    }
    return out;
}

}  // namespace planvec
