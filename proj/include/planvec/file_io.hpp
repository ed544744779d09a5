#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "planvec/grid.hpp"
#include "planvec/mask_io.hpp"

namespace planvec {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const Grid<std::uint8_t>& gray);
std::vector<std::uint8_t> encode_png(const Grid<std::uint16_t>& gray);

/// Decoded lossless raster. Color files come back as RGB, grayscale files
/// as 8- or 16-bit single channel, following the file's own layout.
struct RasterFile {
    enum class Kind { Rgb, Gray8, Gray16 };
    Kind kind = Kind::Rgb;
    RgbImage rgb;
    Grid<std::uint8_t> gray8;
    Grid<std::uint16_t> gray16;
};

RasterFile decode_png(std::span<const std::uint8_t> bytes);
RasterFile read_png_file(const std::filesystem::path& path);

enum class MaskEncoding { Color, Ids };

/// Loads a mask file. Color rasters go through decode_mask; single-channel
/// rasters are read as raw class ids 0..7.
SegMask load_mask_file(const std::filesystem::path& path);
SegMask load_mask_file(const std::filesystem::path& path, std::span<const ClassInfo> palette);
void save_mask_file(const std::filesystem::path& path, const SegMask& mask,
                    MaskEncoding encoding = MaskEncoding::Color);

}  // namespace planvec
