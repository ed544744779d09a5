#include "planvec/file_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <system_error>

#include <fmt/format.h>

namespace planvec {
namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::MissingInput, fmt::format("no such file '{}'", path.string()));
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::MissingInput, fmt::format("no such file '{}'", path.string()));
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", tmp.string()));
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw Error(ErrorCode::Io, fmt::format("short write to '{}'", tmp.string()));
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::Io, fmt::format("cannot move output into '{}'", path.string()));
    }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

std::vector<std::uint8_t> write_png(png_image& image, const void* pixels, std::ptrdiff_t row_stride) {
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, row_stride, nullptr)) {
        throw Error(ErrorCode::Io, fmt::format("png encode failed: {}", image.message));
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, row_stride, nullptr)) {
        throw Error(ErrorCode::Io, fmt::format("png encode failed: {}", image.message));
    }
    out.resize(size);
    return out;
}

png_image blank_image(int width, int height, png_uint_32 format) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorCode::Io, "cannot encode an empty raster");
    }
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    return image;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& rgb) {
    png_image image = blank_image(rgb.width(), rgb.height(), PNG_FORMAT_RGB);
    static_assert(sizeof(Rgb) == 3);
    return write_png(image, rgb.data().data(), rgb.width() * 3);
}

std::vector<std::uint8_t> encode_png(const Grid<std::uint8_t>& gray) {
    png_image image = blank_image(gray.width(), gray.height(), PNG_FORMAT_GRAY);
    return write_png(image, gray.data().data(), gray.width());
}

std::vector<std::uint8_t> encode_png(const Grid<std::uint16_t>& gray) {
    png_image image = blank_image(gray.width(), gray.height(), PNG_FORMAT_LINEAR_Y);
    return write_png(image, gray.data().data(), gray.width());
}

RasterFile decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::Parse, fmt::format("png decode failed: {}", image.message));
    }
    struct Guard {
        png_image* img;
        ~Guard() { png_image_free(img); }
    } guard{&image};

    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    RasterFile out;
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    const bool linear = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
    if (color) {
        out.kind = RasterFile::Kind::Rgb;
        image.format = PNG_FORMAT_RGB;
        out.rgb = RgbImage(width, height);
        if (!png_image_finish_read(&image, nullptr, out.rgb.data().data(), width * 3, nullptr)) {
            throw Error(ErrorCode::Parse, fmt::format("png decode failed: {}", image.message));
        }
    } else if (linear) {
        out.kind = RasterFile::Kind::Gray16;
        image.format = PNG_FORMAT_LINEAR_Y;
        out.gray16 = Grid<std::uint16_t>(width, height);
        if (!png_image_finish_read(&image, nullptr, out.gray16.data().data(), width, nullptr)) {
            throw Error(ErrorCode::Parse, fmt::format("png decode failed: {}", image.message));
        }
    } else {
        out.kind = RasterFile::Kind::Gray8;
        image.format = PNG_FORMAT_GRAY;
        out.gray8 = Grid<std::uint8_t>(width, height);
        if (!png_image_finish_read(&image, nullptr, out.gray8.data().data(), width, nullptr)) {
            throw Error(ErrorCode::Parse, fmt::format("png decode failed: {}", image.message));
        }
    }
    return out;
}

RasterFile read_png_file(const fs::path& path) { return decode_png(read_file_bytes(path)); }

SegMask load_mask_file(const fs::path& path) { return load_mask_file(path, class_palette()); }

SegMask load_mask_file(const fs::path& path, std::span<const ClassInfo> palette) {
    RasterFile raster = read_png_file(path);
    switch (raster.kind) {
        case RasterFile::Kind::Rgb:
            return decode_mask(raster.rgb, palette);
        case RasterFile::Kind::Gray8: {
            SegMask mask(raster.gray8.width(), raster.gray8.height());
            for (std::size_t i = 0; i < mask.size(); ++i) {
                mask[i] = ClassId(raster.gray8[i]);
            }
            return mask;
        }
        case RasterFile::Kind::Gray16:
            break;
    }
    throw Error(ErrorCode::Parse, fmt::format("'{}' is a 16-bit raster, not a mask", path.string()));
}

void save_mask_file(const fs::path& path, const SegMask& mask, MaskEncoding encoding) {
    if (encoding == MaskEncoding::Color) {
        write_file_atomic(path, encode_png(encode_mask(mask)));
        return;
    }
    Grid<std::uint8_t> ids(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        ids[i] = static_cast<std::uint8_t>(mask[i].value());
    }
    write_file_atomic(path, encode_png(ids));
}

}  // namespace planvec
