#include "planvec/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "planvec/geometry.hpp"

namespace planvec {

BetaSet BetaSet::standard() { return BetaSet({2.0, 10.0}); }

BetaSet BetaSet::wide() { return BetaSet({5.0, 10.0, 40.0}); }

BetaSet::BetaSet(std::vector<double> betas) : betas_(std::move(betas)) {
    if (betas_.empty()) {
        throw Error(ErrorCode::NonPositiveBeta, "beta set is empty");
    }
    for (double b : betas_) {
        if (!(b > 0) || !std::isfinite(b)) {
            throw Error(ErrorCode::NonPositiveBeta, fmt::format("beta {} is not positive", b));
        }
    }
}

std::string BetaSet::to_string() const { return fmt::format("{}", fmt::join(betas_, ",")); }

EndpointPair opening_endpoints(const Component& component) {
    if (component.pixels.empty()) {
        throw Error(ErrorCode::EmptyPointSet, "component has no pixels");
    }
    const Contour contour = trace_contour(component);
    std::vector<Point2> pts;
    pts.reserve(contour.points.size());
    for (const Pixel& p : contour.points) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    // The farthest pair of a point set is a pair of hull vertices.
    const std::vector<Point2> hull = convex_hull(std::move(pts));

    auto ordered = [](Pixel u, Pixel v) { return u <= v ? EndpointPair{u, v} : EndpointPair{v, u}; };
    auto key = [](const EndpointPair& e) { return std::tuple(e.a.y, e.a.x, e.b.y, e.b.x); };

    std::vector<Pixel> vertices;
    for (const Point2& p : hull) vertices.push_back({static_cast<int>(p.x), static_cast<int>(p.y)});
    EndpointPair best = ordered(vertices.front(), vertices.front());
    long long best_d2 = -1;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i; j < vertices.size(); ++j) {
            const long long dx = vertices[i].x - vertices[j].x;
            const long long dy = vertices[i].y - vertices[j].y;
            const long long d2 = dx * dx + dy * dy;
            const EndpointPair cand = ordered(vertices[i], vertices[j]);
            if (d2 > best_d2 || (d2 == best_d2 && key(cand) < key(best))) {
                best = cand;
                best_d2 = d2;
            }
        }
    }
    return best;
}

Heatmap heatmap_single(std::span<const Pixel> endpoints, double beta, int width, int height, double cutoff) {
    if (!(beta > 0) || !std::isfinite(beta)) {
        throw Error(ErrorCode::NonPositiveBeta, fmt::format("beta {} is not positive", beta));
    }
    Heatmap out(width, height, 0.0);
    const double beta2 = beta * beta;
    // exp(-r^2 / beta^2) == cutoff at r = beta * sqrt(-ln cutoff).
    const double radius = cutoff > 0 ? beta * std::sqrt(-std::log(cutoff)) : std::hypot(width, height) + 1.0;
    const int reach = static_cast<int>(std::ceil(radius));
    for (const Pixel& e : endpoints) {
        const int y0 = std::max(0, e.y - reach);
        const int y1 = std::min(height - 1, e.y + reach);
        const int x0 = std::max(0, e.x - reach);
        const int x1 = std::min(width - 1, e.x + reach);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - e.x;
                const double dy = y - e.y;
                const double v = std::exp(-(dx * dx + dy * dy) / beta2);
                if (v >= cutoff) {
                    double& cell = out.at(x, y);
                    cell = std::max(cell, v);
                }
            }
        }
    }
    return out;
}

Heatmap heatmap_average(std::span<const Pixel> endpoints, const BetaSet& betas, int width, int height,
                        double cutoff) {
    Heatmap sum(width, height, 0.0);
    for (double beta : betas.values()) {
        const Heatmap h = heatmap_single(endpoints, beta, width, height, cutoff);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += h[i];
    }
    const double inv = 1.0 / static_cast<double>(betas.values().size());
    for (double& v : sum.data()) {
        v *= inv;
        if (v < cutoff) v = 0.0;
    }
    return sum;
}

double mhr_loss(const std::map<ClassId, Heatmap>& predictions, const std::map<ClassId, Heatmap>& targets) {
    if (targets.empty() || predictions.empty()) {
        throw Error(ErrorCode::EmptyClassSet, "heatmap loss needs at least one opening class");
    }
    if (predictions.size() != targets.size()) {
        throw Error(ErrorCode::DimensionMismatch, "prediction and target class sets differ");
    }
    double total = 0.0;
    for (const auto& [cls, target] : targets) {
        const auto it = predictions.find(cls);
        if (it == predictions.end()) {
            throw Error(ErrorCode::DimensionMismatch,
                        fmt::format("no prediction for class {}", class_info(cls).name));
        }
        const Heatmap& pred = it->second;
        if (!pred.same_shape(target)) {
            throw Error(ErrorCode::DimensionMismatch,
                        fmt::format("prediction {}x{} vs target {}x{} for class {}", pred.width(), pred.height(),
                                    target.width(), target.height(), class_info(cls).name));
        }
        if (target.empty()) {
            throw Error(ErrorCode::DimensionMismatch, "empty heatmap");
        }
        double sq = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i) {
            const double d = pred[i] - target[i];
            sq += d * d;
        }
        total += sq / static_cast<double>(target.size());
    }
    return total / static_cast<double>(targets.size());
}

std::vector<Pixel> class_endpoints(const SegMask& mask, ClassId cls) {
    const ClassId only[] = {cls};
    std::vector<Pixel> endpoints;
    for (const Component& comp : connected_components(joint_mask(mask, only))) {
        const EndpointPair pair = opening_endpoints(comp);
        endpoints.push_back(pair.a);
        if (pair.b != pair.a) endpoints.push_back(pair.b);
    }
    return endpoints;
}

std::map<ClassId, Heatmap> opening_heatmaps(const SegMask& mask, const BetaSet& betas, double cutoff) {
    std::map<ClassId, Heatmap> out;
    for (const ClassInfo& info : class_palette()) {
        if (!info.is_opening) continue;
        const std::vector<Pixel> endpoints = class_endpoints(mask, info.id);
        out.emplace(info.id, heatmap_average(endpoints, betas, mask.width(), mask.height(), cutoff));
    }
    return out;
}

Grid<std::uint16_t> quantize_heatmap(const Heatmap& heatmap) {
    Grid<std::uint16_t> out(heatmap.width(), heatmap.height());
    for (std::size_t i = 0; i < heatmap.size(); ++i) {
        const double v = std::clamp(heatmap[i], 0.0, 1.0);
        out[i] = static_cast<std::uint16_t>(std::lround(65535.0 * v));
    }
    return out;
}

Heatmap dequantize_heatmap(const Grid<std::uint16_t>& raster) {
    Heatmap out(raster.width(), raster.height());
    for (std::size_t i = 0; i < raster.size(); ++i) out[i] = raster[i] / 65535.0;
    return out;
}

}  // namespace planvec
