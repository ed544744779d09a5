#include "planvec/mask_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

namespace planvec {

ClassId::ClassId(int value) {
    if (value < 0 || value >= kCount) {
        throw Error(ErrorCode::InvalidClassId, fmt::format("class id {} outside 0..7", value));
    }
    value_ = static_cast<std::uint8_t>(value);
}

const std::vector<ClassInfo>& class_palette() {
    static const std::vector<ClassInfo> palette = {
        {classes::kBackground, "Background", {255, 255, 255}, false, false},
        {classes::kWall, "Wall", {0, 0, 0}, true, false},
        {classes::kGlassWall, "Glass wall", {230, 25, 75}, true, false},
        {classes::kRailing, "Railing", {60, 180, 75}, true, false},
        {classes::kDoor, "Door", {255, 225, 25}, false, true},
        {classes::kSlidingDoor, "Sliding door", {0, 130, 200}, false, true},
        {classes::kWindow, "Window", {245, 130, 48}, false, true},
        {classes::kStairs, "Stairs", {70, 240, 240}, false, false},
    };
    return palette;
}

const ClassInfo& class_info(ClassId id) { return class_palette()[static_cast<std::size_t>(id.value())]; }

bool is_opening(ClassId id) { return class_info(id).is_opening; }

bool is_boundary(ClassId id) { return class_info(id).is_boundary; }

std::string class_slug(ClassId id) {
    std::string slug = class_info(id).name;
    for (char& c : slug) {
        c = c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return slug;
}

ClassId parse_class(const std::string& text) {
    std::string key;
    for (char c : text) {
        key.push_back(c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (!key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return ClassId(std::atoi(key.c_str()));
    }
    for (const auto& info : class_palette()) {
        if (class_slug(info.id) == key) {
            return info.id;
        }
    }
    throw Error(ErrorCode::InvalidClassId, fmt::format("unknown class '{}'", text));
}

int chebyshev_distance(Rgb a, Rgb b) {
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

void validate_palette(std::span<const ClassInfo> palette, int tolerance) {
    for (std::size_t i = 0; i < palette.size(); ++i) {
        for (std::size_t j = i + 1; j < palette.size(); ++j) {
            if (chebyshev_distance(palette[i].color, palette[j].color) <= 2 * tolerance) {
                throw Error(ErrorCode::InvalidSpec,
                            fmt::format("palette colors of '{}' and '{}' are closer than 2x tolerance",
                                        palette[i].name, palette[j].name));
            }
        }
    }
}

SegMask decode_mask(const RgbImage& raster) { return decode_mask(raster, class_palette()); }

SegMask decode_mask(const RgbImage& raster, std::span<const ClassInfo> palette, int tolerance) {
    SegMask mask(raster.width(), raster.height());
    for (int y = 0; y < raster.height(); ++y) {
        for (int x = 0; x < raster.width(); ++x) {
            const Rgb c = raster.at(x, y);
            const ClassInfo* match = nullptr;
            bool exact = false;
            int candidates = 0;
            for (const auto& info : palette) {
                const int d = chebyshev_distance(c, info.color);
                if (d == 0) {
                    match = &info;
                    exact = true;
                    break;
                }
                if (d <= tolerance) {
                    ++candidates;
                    match = &info;
                }
            }
            if (!exact && candidates > 1) {
                throw Error(ErrorCode::AmbiguousColor,
                            fmt::format("pixel ({}, {}) color ({}, {}, {}) matches several classes", x, y,
                                        c.r, c.g, c.b));
            }
            if (match == nullptr) {
                throw Error(ErrorCode::UnknownColor,
                            fmt::format("pixel ({}, {}) color ({}, {}, {}) matches no class", x, y, c.r,
                                        c.g, c.b));
            }
            mask.at(x, y) = match->id;
        }
    }
    return mask;
}

RgbImage encode_mask(const SegMask& mask) { return encode_mask(mask, class_palette()); }

RgbImage encode_mask(const SegMask& mask, std::span<const ClassInfo> palette) {
    std::array<Rgb, ClassId::kCount> lut{};
    std::array<bool, ClassId::kCount> known{};
    for (const auto& info : palette) {
        lut[static_cast<std::size_t>(info.id.value())] = info.color;
        known[static_cast<std::size_t>(info.id.value())] = true;
    }
    RgbImage image(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const auto v = static_cast<std::size_t>(mask[i].value());
        if (!known[v]) {
            throw Error(ErrorCode::InvalidClassId, fmt::format("palette has no color for class {}", v));
        }
        image[i] = lut[v];
    }
    return image;
}

BinaryMask joint_mask(const SegMask& mask, std::span<const ClassId> classes) {
    if (classes.empty()) {
        throw Error(ErrorCode::EmptyClassSet, "joint mask needs at least one class");
    }
    std::array<bool, ClassId::kCount> selected{};
    for (ClassId c : classes) {
        selected[static_cast<std::size_t>(c.value())] = true;
    }
    BinaryMask out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out[i] = selected[static_cast<std::size_t>(mask[i].value())] ? 1 : 0;
    }
    return out;
}

BinaryMask joint_mask(const SegMask& mask) { return joint_mask(mask, classes::kStructural); }

}  // namespace planvec
