#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "planvec/grid.hpp"

namespace planvec {

/// Structural class identifier. 0 is background, 1..7 are the structural
/// classes (wall, glass wall, railing, door, sliding door, window, stairs).
class ClassId {
public:
    static constexpr int kCount = 8;

    constexpr ClassId() = default;
    explicit ClassId(int value);

    static constexpr ClassId unchecked(std::uint8_t value) {
        ClassId id;
        id.value_ = value;
        return id;
    }

    constexpr int value() const noexcept { return value_; }
    constexpr bool is_background() const noexcept { return value_ == 0; }

    friend constexpr bool operator==(ClassId a, ClassId b) { return a.value_ == b.value_; }
    friend constexpr auto operator<=>(ClassId a, ClassId b) { return a.value_ <=> b.value_; }

private:
    std::uint8_t value_ = 0;
};

namespace classes {
inline constexpr ClassId kBackground = ClassId::unchecked(0);
inline constexpr ClassId kWall = ClassId::unchecked(1);
inline constexpr ClassId kGlassWall = ClassId::unchecked(2);
inline constexpr ClassId kRailing = ClassId::unchecked(3);
inline constexpr ClassId kDoor = ClassId::unchecked(4);
inline constexpr ClassId kSlidingDoor = ClassId::unchecked(5);
inline constexpr ClassId kWindow = ClassId::unchecked(6);
inline constexpr ClassId kStairs = ClassId::unchecked(7);

/// The seven structural classes in id order.
inline constexpr std::array<ClassId, 7> kStructural = {
    kWall, kGlassWall, kRailing, kDoor, kSlidingDoor, kWindow, kStairs};
}  // namespace classes

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ClassInfo {
    ClassId id;
    std::string name;
    Rgb color;
    bool is_boundary = false;
    bool is_opening = false;
};

using SegMask = Grid<ClassId>;
using BinaryMask = Grid<std::uint8_t>;
using RgbImage = Grid<Rgb>;

/// Per-channel tolerance used when matching raster colors to the palette.
inline constexpr int kColorTolerance = 8;

/// Background plus the seven structural classes, in id order.
const std::vector<ClassInfo>& class_palette();

const ClassInfo& class_info(ClassId id);
bool is_opening(ClassId id);
bool is_boundary(ClassId id);

/// Class name with spaces replaced by underscores, lower case ("glass_wall").
std::string class_slug(ClassId id);

/// Parses a class by slug, display name (case-insensitive) or numeric id.
ClassId parse_class(const std::string& text);

int chebyshev_distance(Rgb a, Rgb b);

/// Checks that palette colors are pairwise separated by more than twice
/// the tolerance. Throws InvalidSpec otherwise.
void validate_palette(std::span<const ClassInfo> palette, int tolerance = kColorTolerance);

SegMask decode_mask(const RgbImage& raster);
SegMask decode_mask(const RgbImage& raster, std::span<const ClassInfo> palette,
                    int tolerance = kColorTolerance);

RgbImage encode_mask(const SegMask& mask);
RgbImage encode_mask(const SegMask& mask, std::span<const ClassInfo> palette);

BinaryMask joint_mask(const SegMask& mask, std::span<const ClassId> classes);

/// Joint mask over every structural class.
BinaryMask joint_mask(const SegMask& mask);

}  // namespace planvec
