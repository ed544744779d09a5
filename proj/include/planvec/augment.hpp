#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "planvec/mask_io.hpp"

namespace planvec {

struct AugmentSpec {
    bool horizontal_flip = false;
    bool vertical_flip = false;
    /// Allowed rotations in degrees; only 90, 180 and 270 are accepted.
    /// Zero rotation is always a candidate.
    std::vector<int> rotations;
    double crop_min = 1.0;
    double crop_max = 1.0;
    double scale_min = 1.0;
    double scale_max = 1.0;
    std::uint64_t seed = 0;

    void validate() const;

    /// Keys: hflip, vflip, rotations (comma list), crop_min, crop_max,
    /// scale_min, scale_max, seed.
    static AugmentSpec from_config(std::string_view text);
};

/// One concrete transform sequence, applied in field order:
/// flips, rotation, crop, scale.
struct AugmentPlan {
    bool flip_horizontal = false;
    bool flip_vertical = false;
    int rotation = 0;  // degrees, multiple of 90
    double crop_fraction_x = 1.0;
    double crop_fraction_y = 1.0;
    double crop_offset_x = 0.0;  // in [0, 1]: share of the free margin
    double crop_offset_y = 0.0;
    double scale = 1.0;
};

/// Samples a plan from the spec's seed; identical seeds give identical plans.
AugmentPlan sample_plan(const AugmentSpec& spec);

/// Applies the plan. Masks resample nearest-neighbor, images bilinear.
std::pair<RgbImage, SegMask> apply_plan(const RgbImage& image, const SegMask& mask, const AugmentPlan& plan);

std::pair<RgbImage, SegMask> augment_pair(const RgbImage& image, const SegMask& mask, const AugmentSpec& spec);

struct ManifestEntry {
    std::filesystem::path image_in;
    std::filesystem::path mask_in;
    std::filesystem::path image_out;
    std::filesystem::path mask_out;
};

/// Batch manifest: one entry per line, four whitespace-separated paths
/// (image in, mask in, image out, mask out). '#' starts a comment line.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

}  // namespace planvec
