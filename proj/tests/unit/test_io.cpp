#include <doctest.h>

#include <filesystem>
#include <random>

#include <json.hpp>

#include "planvec/file_io.hpp"
#include "planvec/key_value.hpp"
#include "planvec/polygon_io.hpp"

using namespace planvec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "planvec_test_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("key=value parsing") {
    const auto kv = parse_key_values("# header\n a = 1 \n\nb=x=y\n");
    REQUIRE(kv.size() == 2);
    CHECK(kv[0].key == "a");
    CHECK(kv[0].value == "1");
    CHECK(kv[0].line == 2);
    CHECK(kv[1].value == "x=y");
    CHECK_THROWS_AS(parse_key_values("novalue\n"), Error);
    CHECK_THROWS_AS(parse_key_values("=3\n"), Error);
    CHECK(parse_double("0.25", "x") == 0.25);
    CHECK_THROWS_AS(parse_double("0.25m", "x"), Error);
    CHECK_THROWS_AS(parse_double("nan", "x"), Error);
    CHECK(parse_integer("-7", "x") == -7);
    CHECK(parse_bool("yes", "x"));
    CHECK_FALSE(parse_bool("0", "x"));
    CHECK(parse_double_list("2, 10", "x") == std::vector<double>{2, 10});
}

TEST_CASE("png round trips") {
    std::mt19937 rng(6);
    RgbImage rgb(7, 5);
    for (auto& p : rgb.data()) p = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
    const RasterFile a = decode_png(encode_png(rgb));
    CHECK(a.kind == RasterFile::Kind::Rgb);
    CHECK(a.rgb == rgb);

    Grid<std::uint8_t> g8(3, 4);
    for (auto& v : g8.data()) v = std::uint8_t(rng());
    const RasterFile b = decode_png(encode_png(g8));
    CHECK(b.kind == RasterFile::Kind::Gray8);
    CHECK(b.gray8 == g8);

    Grid<std::uint16_t> g16(4, 3);
    for (auto& v : g16.data()) v = std::uint16_t(rng());
    const RasterFile c = decode_png(encode_png(g16));
    CHECK(c.kind == RasterFile::Kind::Gray16);
    CHECK(c.gray16 == g16);

    CHECK(encode_png(rgb) == encode_png(rgb));
    CHECK_THROWS_AS(decode_png(std::vector<std::uint8_t>{1, 2, 3}), Error);
}

TEST_CASE("mask files in both encodings") {
    SegMask m(6, 4);
    for (int i = 0; i < 24; ++i) m[static_cast<std::size_t>(i)] = ClassId(i % 8);
    const fs::path color = scratch("color.png");
    const fs::path ids = scratch("ids.png");
    save_mask_file(color, m, MaskEncoding::Color);
    save_mask_file(ids, m, MaskEncoding::Ids);
    CHECK(load_mask_file(color) == m);
    CHECK(load_mask_file(ids) == m);

    Grid<std::uint8_t> bad(2, 2, 9);
    write_file_atomic(scratch("bad_ids.png"), std::span<const std::uint8_t>(encode_png(bad)));
    CHECK_THROWS_AS(load_mask_file(scratch("bad_ids.png")), Error);

    try {
        load_mask_file(scratch("missing.png"));
        FAIL("expected MissingInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingInput);
        CHECK(std::string(e.what()).find("missing.png") != std::string::npos);
    }
}

TEST_CASE("atomic write replaces content and leaves no temp files") {
    const fs::path p = scratch("atomic.txt");
    write_file_atomic(p, std::string_view("first"));
    write_file_atomic(p, std::string_view("second"));
    CHECK(read_text_file(p) == "second");
    int temps = 0;
    for (const auto& e : fs::directory_iterator(p.parent_path()))
        if (e.path().filename().string().find("atomic.txt.") == 0) ++temps;
    CHECK(temps == 0);
}

TEST_CASE("polygon text format") {
    CHECK(format_fixed(-0.001, 2) == "0.00");
    CHECK(format_fixed(1.005, 2) == "1.00");
    CHECK(format_fixed(2.5, 2) == "2.50");

    PolygonSet s;
    s.polygons.push_back({{{0, 0}, {10.25, 0}, {10.25, 3.5}}, classes::kWall, false});
    s.polygons.push_back({{{1, 1}, {2, 1}, {2, 2}, {1, 2}}, classes::kWindow, false});
    const std::string text = write_polygons_text(s);
    CHECK(text == "1 3 0.00 0.00 10.25 0.00 10.25 3.50\n6 4 1.00 1.00 2.00 1.00 2.00 2.00 1.00 2.00\n");
    const PolygonSet back = read_polygons_text(text);
    REQUIRE(back.polygons.size() == 2);
    CHECK(back.polygons[0].cls == classes::kWall);
    CHECK(back.polygons[1].vertices == s.polygons[1].vertices);
    CHECK(write_polygons_text(PolygonSet{}).empty());
    try {
        read_polygons_text("1 3 0 0 1 0\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(read_polygons_text("9 3 0 0 1 0 1 1\n"), Error);
}

TEST_CASE("polygon geojson") {
    PolygonSet s;
    s.polygons.push_back({{{0, 0}, {4, 0}, {4, 2}}, classes::kDoor, false});
    const auto doc = nlohmann::json::parse(write_polygons_geojson(s));
    CHECK(doc["type"] == "FeatureCollection");
    const auto& f = doc["features"][0];
    CHECK(f["properties"]["class_id"] == 4);
    CHECK(f["properties"]["class"] == "Door");
    const auto& ring = f["geometry"]["coordinates"][0];
    CHECK(ring.size() == 4);
    CHECK(ring[0] == ring[3]);
}
