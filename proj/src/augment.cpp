#include "planvec/augment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "planvec/key_value.hpp"

namespace planvec {

void AugmentSpec::validate() const {
    for (int r : rotations) {
        if (r != 90 && r != 180 && r != 270) {
            throw Error(ErrorCode::InvalidSpec, fmt::format("rotation {} is not 90, 180 or 270", r));
        }
    }
    if (!(crop_min > 0 && crop_min <= crop_max && crop_max <= 1)) {
        throw Error(ErrorCode::InvalidSpec, fmt::format("crop range [{}, {}] not within (0, 1]", crop_min, crop_max));
    }
    if (!(scale_min > 0 && scale_min <= scale_max) || !std::isfinite(scale_max)) {
        throw Error(ErrorCode::InvalidSpec, fmt::format("scale range [{}, {}] invalid", scale_min, scale_max));
    }
}

AugmentSpec AugmentSpec::from_config(std::string_view text) {
    AugmentSpec spec;
    for (const auto& kv : parse_key_values(text)) {
        if (kv.key == "hflip") spec.horizontal_flip = parse_bool(kv.value, kv.key);
        else if (kv.key == "vflip") spec.vertical_flip = parse_bool(kv.value, kv.key);
        else if (kv.key == "rotations") {
            spec.rotations.clear();
            for (double r : parse_double_list(kv.value, kv.key)) spec.rotations.push_back(static_cast<int>(r));
        } else if (kv.key == "crop_min") spec.crop_min = parse_double(kv.value, kv.key);
        else if (kv.key == "crop_max") spec.crop_max = parse_double(kv.value, kv.key);
        else if (kv.key == "scale_min") spec.scale_min = parse_double(kv.value, kv.key);
        else if (kv.key == "scale_max") spec.scale_max = parse_double(kv.value, kv.key);
        else if (kv.key == "seed") spec.seed = static_cast<std::uint64_t>(parse_integer(kv.value, kv.key));
        else throw Error(ErrorCode::Config, fmt::format("line {}: unknown augment key '{}'", kv.line, kv.key));
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    return spec;
}

namespace {

// Uniform double in [lo, hi] from raw 64-bit draws, independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * unit;
}

}  // namespace

AugmentPlan sample_plan(const AugmentSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    AugmentPlan plan;
    // Every draw happens whether or not the option is enabled so that
    // toggling one option does not reshuffle the others.
    const bool h = (rng() & 1u) != 0;
    const bool v = (rng() & 1u) != 0;
    const std::uint64_t rot_draw = rng();
    plan.flip_horizontal = spec.horizontal_flip && h;
    plan.flip_vertical = spec.vertical_flip && v;
    if (!spec.rotations.empty()) {
        const std::size_t choice = rot_draw % (spec.rotations.size() + 1);
        plan.rotation = choice == 0 ? 0 : spec.rotations[choice - 1];
    }
    plan.crop_fraction_x = uniform(rng, spec.crop_min, spec.crop_max);
    plan.crop_fraction_y = uniform(rng, spec.crop_min, spec.crop_max);
    plan.crop_offset_x = uniform(rng, 0.0, 1.0);
    plan.crop_offset_y = uniform(rng, 0.0, 1.0);
    plan.scale = uniform(rng, spec.scale_min, spec.scale_max);
    return plan;
}

namespace {

template <typename T>
Grid<T> flip_h(const Grid<T>& g) {
    Grid<T> out(g.width(), g.height());
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) out.at(g.width() - 1 - x, y) = g.at(x, y);
    return out;
}

template <typename T>
Grid<T> flip_v(const Grid<T>& g) {
    Grid<T> out(g.width(), g.height());
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) out.at(x, g.height() - 1 - y) = g.at(x, y);
    return out;
}

// Clockwise rotation on screen by `degrees`.
template <typename T>
Grid<T> rotate(const Grid<T>& g, int degrees) {
    const int w = g.width();
    const int h = g.height();
    switch (((degrees % 360) + 360) % 360) {
        case 90: {
            Grid<T> out(h, w);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) out.at(h - 1 - y, x) = g.at(x, y);
            return out;
        }
        case 180: {
            Grid<T> out(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) out.at(w - 1 - x, h - 1 - y) = g.at(x, y);
            return out;
        }
        case 270: {
            Grid<T> out(h, w);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) out.at(y, w - 1 - x) = g.at(x, y);
            return out;
        }
        default:
            return g;
    }
}

template <typename T>
Grid<T> crop(const Grid<T>& g, int x0, int y0, int w, int h) {
    Grid<T> out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = g.at(x0 + x, y0 + y);
    return out;
}

SegMask scale_nearest(const SegMask& g, int w, int h) {
    SegMask out(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = std::min(g.height() - 1, static_cast<int>((y + 0.5) * g.height() / h));
        for (int x = 0; x < w; ++x) {
            const int sx = std::min(g.width() - 1, static_cast<int>((x + 0.5) * g.width() / w));
            out.at(x, y) = g.at(sx, sy);
        }
    }
    return out;
}

RgbImage scale_bilinear(const RgbImage& g, int w, int h) {
    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        const double fy = std::clamp((y + 0.5) * g.height() / h - 0.5, 0.0, g.height() - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, g.height() - 1);
        const double ty = fy - y0;
        for (int x = 0; x < w; ++x) {
            const double fx = std::clamp((x + 0.5) * g.width() / w - 0.5, 0.0, g.width() - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, g.width() - 1);
            const double tx = fx - x0;
            auto mix = [&](auto channel) {
                const double top = channel(g.at(x0, y0)) * (1 - tx) + channel(g.at(x1, y0)) * tx;
                const double bottom = channel(g.at(x0, y1)) * (1 - tx) + channel(g.at(x1, y1)) * tx;
                return static_cast<std::uint8_t>(std::lround(std::clamp(top * (1 - ty) + bottom * ty, 0.0, 255.0)));
            };
            out.at(x, y) = Rgb{mix([](Rgb c) { return double(c.r); }), mix([](Rgb c) { return double(c.g); }),
                               mix([](Rgb c) { return double(c.b); })};
        }
    }
    return out;
}

}  // namespace

std::pair<RgbImage, SegMask> apply_plan(const RgbImage& image, const SegMask& mask, const AugmentPlan& plan) {
    if (!image.same_shape(mask)) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("image {}x{} vs mask {}x{}", image.width(),
                                                              image.height(), mask.width(), mask.height()));
    }
    RgbImage img = image;
    SegMask m = mask;
    if (plan.flip_horizontal) {
        img = flip_h(img);
        m = flip_h(m);
    }
    if (plan.flip_vertical) {
        img = flip_v(img);
        m = flip_v(m);
    }
    if (plan.rotation % 360 != 0) {
        img = rotate(img, plan.rotation);
        m = rotate(m, plan.rotation);
    }
    const int cw = static_cast<int>(std::floor(m.width() * plan.crop_fraction_x));
    const int ch = static_cast<int>(std::floor(m.height() * plan.crop_fraction_y));
    if (cw <= 0 || ch <= 0) {
        throw Error(ErrorCode::EmptyCrop, fmt::format("crop of {}x{} leaves no pixels", m.width(), m.height()));
    }
    if (cw != m.width() || ch != m.height()) {
        const int x0 = static_cast<int>(std::floor((m.width() - cw) * std::clamp(plan.crop_offset_x, 0.0, 1.0)));
        const int y0 = static_cast<int>(std::floor((m.height() - ch) * std::clamp(plan.crop_offset_y, 0.0, 1.0)));
        img = crop(img, x0, y0, cw, ch);
        m = crop(m, x0, y0, cw, ch);
    }
    if (plan.scale != 1.0) {
        const int sw = static_cast<int>(std::lround(m.width() * plan.scale));
        const int sh = static_cast<int>(std::lround(m.height() * plan.scale));
        if (sw <= 0 || sh <= 0) {
            throw Error(ErrorCode::EmptyCrop, fmt::format("scale {} leaves no pixels", plan.scale));
        }
        img = scale_bilinear(img, sw, sh);
        m = scale_nearest(m, sw, sh);
    }
    return {std::move(img), std::move(m)};
}

std::pair<RgbImage, SegMask> augment_pair(const RgbImage& image, const SegMask& mask, const AugmentSpec& spec) {
    return apply_plan(image, mask, sample_plan(spec));
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream fields(t);
        std::string a, b, c, d, extra;
        if (!(fields >> a >> b >> c >> d) || (fields >> extra)) {
            throw Error(ErrorCode::Config, fmt::format("manifest line {}: expected 4 paths", line_no));
        }
        out.push_back({a, b, c, d});
    }
    return out;
}

}  // namespace planvec
