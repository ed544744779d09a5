#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "planvec/cli.hpp"
#include "planvec/file_io.hpp"
#include "planvec/polygon_io.hpp"
#include "synthetic.hpp"

using namespace planvec;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "planvec_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string p(const fs::path& path) { return path.string(); }

}  // namespace

TEST_CASE("exit status mapping") {
    CHECK(exit_status_for(ErrorCode::MissingInput) == 2);
    CHECK(exit_status_for(ErrorCode::MalformedDocument) == 3);
    CHECK(exit_status_for(ErrorCode::DimensionMismatch) == 4);
    CHECK(exit_status_for(ErrorCode::Config) == 5);
    CHECK(exit_status_for(ErrorCode::SelfIntersectingPolygon) == 1);
}

TEST_CASE("rasterize") {
    const fs::path dir = fresh_dir("rasterize");
    write_file_atomic(dir / "plan.svg",
                      std::string_view(R"(<svg width="10" height="10"><rect class="Wall" width="5" height="5"/></svg>)"));
    const Run ok = cli({"rasterize", p(dir / "plan.svg"), p(dir / "mask.png")});
    CHECK(ok.code == 0);
    const SegMask m = load_mask_file(dir / "mask.png");
    CHECK(m.width() == 10);
    CHECK(m.at(4, 4) == classes::kWall);
    CHECK(m.at(5, 5) == classes::kBackground);

    CHECK(cli({"rasterize", p(dir / "plan.svg"), p(dir / "ids.png"), "--ids", "--width", "6", "--height", "6"}).code == 0);
    CHECK(read_png_file(dir / "ids.png").kind == RasterFile::Kind::Gray8);

    const Run missing = cli({"rasterize", p(dir / "nope.svg"), p(dir / "m.png")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("nope.svg") != std::string::npos);

    write_file_atomic(dir / "bad.svg", std::string_view("<svg>\n<g>\n</svg>"));
    const Run bad = cli({"rasterize", p(dir / "bad.svg"), p(dir / "m.png")});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("line 3") != std::string::npos);
    CHECK(bad.err.find("column") != std::string::npos);

    write_file_atomic(dir / "nosize.svg", std::string_view(R"(<svg><rect class="Wall" width="5" height="5"/></svg>)"));
    CHECK(cli({"rasterize", p(dir / "nosize.svg"), p(dir / "m.png")}).code == 5);
}

TEST_CASE("vectorize and reconstruct") {
    const fs::path dir = fresh_dir("vectorize");
    save_mask_file(dir / "plan.png", planvec::testing::synthetic_plan(1));
    CHECK(cli({"vectorize", p(dir / "plan.png"), p(dir / "poly.txt")}).code == 0);
    const std::string base = read_text_file(dir / "poly.txt");
    CHECK_FALSE(read_polygons_text(base).polygons.empty());

    CHECK(cli({"vectorize", p(dir / "plan.png"), p(dir / "strict.txt"), "--eps-u", "0.9"}).code == 0);
    CHECK(read_polygons_text(read_text_file(dir / "strict.txt")).polygons.size() >=
          read_polygons_text(base).polygons.size());
    CHECK(cli({"vectorize", p(dir / "plan.png"), p(dir / "x.txt"), "--eps-u", "1.5"}).code == 5);
    CHECK(cli({"vectorize", p(dir / "plan.png"), p(dir / "g.json"), "--format", "geojson"}).code == 0);

    save_mask_file(dir / "empty.png", SegMask(8, 8));
    CHECK(cli({"vectorize", p(dir / "empty.png"), p(dir / "empty.txt")}).code == 0);
    CHECK(read_text_file(dir / "empty.txt").empty());

    CHECK(cli({"reconstruct", p(dir / "poly.txt"), p(dir / "mesh.obj")}).code == 0);
    const std::string mesh = read_text_file(dir / "mesh.obj");
    CHECK(mesh.find("g Wall") != std::string::npos);
    CHECK(cli({"reconstruct", p(dir / "poly.txt"), p(dir / "tall.obj"), "--level", "wall.height=9"}).code == 0);
    CHECK(read_text_file(dir / "tall.obj").find(" 9.0000\n") != std::string::npos);
    CHECK(cli({"reconstruct", p(dir / "empty.txt"), p(dir / "e.obj")}).code == 0);
    CHECK(read_text_file(dir / "e.obj") == "# planvec mesh\n");
    CHECK(cli({"reconstruct", p(dir / "poly.txt"), p(dir / "x.obj"), "--level", "roof.height=1"}).code == 5);

    save_mask_file(dir / "small.png", SegMask(4, 4));
    CHECK(cli({"evaluate", p(dir / "plan.png"), p(dir / "small.png")}).code == 4);
}

TEST_CASE("heatmaps") {
    const fs::path dir = fresh_dir("heatmaps");
    SegMask m(20, 10);
    planvec::testing::fill_rect(m, 2, 2, 12, 3, classes::kDoor);
    save_mask_file(dir / "m.png", m);
    CHECK(cli({"heatmaps", p(dir / "m.png"), p(dir / "out")}).code == 0);
    CHECK(read_text_file(dir / "out" / "betas.txt") == "2,10\n");
    const RasterFile door = read_png_file(dir / "out" / "heatmap_door.png");
    REQUIRE(door.kind == RasterFile::Kind::Gray16);
    CHECK(door.gray16.at(2, 2) == 65535);
    const RasterFile win = read_png_file(dir / "out" / "heatmap_window.png");
    CHECK(std::all_of(win.gray16.data().begin(), win.gray16.data().end(), [](auto v) { return v == 0; }));
    CHECK(fs::exists(dir / "out" / "heatmap_sliding_door.png"));

    CHECK(cli({"heatmaps", p(dir / "m.png"), p(dir / "out5"), "--betas", "5"}).code == 0);
    CHECK(read_text_file(dir / "out5" / "betas.txt") == "5\n");
    CHECK(cli({"heatmaps", p(dir / "m.png"), p(dir / "bad"), "--betas", "-1"}).code == 5);
}

TEST_CASE("evaluate") {
    const fs::path dir = fresh_dir("evaluate");
    save_mask_file(dir / "a.png", planvec::testing::synthetic_plan(2));
    const Run same = cli({"evaluate", p(dir / "a.png"), p(dir / "a.png"), "--key-values"});
    CHECK(same.code == 0);
    CHECK(same.out.find("mean.iou=1.000000") != std::string::npos);
    const Run merged = cli({"evaluate", p(dir / "a.png"), p(dir / "a.png"), "--merge", "door+sliding_door+window=Openings"});
    CHECK(merged.code == 0);
    CHECK(merged.out.find("Openings") != std::string::npos);
    CHECK(merged.out.find("\nDoor ") == std::string::npos);
    CHECK(cli({"evaluate", p(dir / "a.png"), p(dir / "a.png"), "--merge", "door"}).code == 5);
}

TEST_CASE("pipeline, config precedence and determinism") {
    const fs::path dir = fresh_dir("pipeline");
    save_mask_file(dir / "plan.png", planvec::testing::synthetic_plan(4));
    CHECK(cli({"pipeline", p(dir / "plan.png"), p(dir / "a")}).code == 0);
    CHECK(cli({"pipeline", p(dir / "plan.png"), p(dir / "b"), "--threads", "3"}).code == 0);
    for (const char* f : {"polygons.txt", "mesh.obj", "manifest.txt"}) CHECK(fs::exists(dir / "a" / f));
    CHECK(read_text_file(dir / "a" / "polygons.txt") == read_text_file(dir / "b" / "polygons.txt"));
    CHECK(read_text_file(dir / "a" / "mesh.obj") == read_text_file(dir / "b" / "mesh.obj"));
    const std::string manifest = read_text_file(dir / "a" / "manifest.txt");
    CHECK(manifest.find("eps_u=0.5\n") != std::string::npos);
    CHECK(manifest.find("betas=2,10\n") != std::string::npos);
    CHECK(manifest.find("time.vectorize_s=") != std::string::npos);

    write_file_atomic(dir / "cfg.txt", std::string_view("eps_u=0.7\nwall.height=3\n"));
    CHECK(cli({"pipeline", p(dir / "plan.png"), p(dir / "c"), "--config", p(dir / "cfg.txt"), "--eps-u", "0.6"}).code == 0);
    const std::string m2 = read_text_file(dir / "c" / "manifest.txt");
    CHECK(m2.find("eps_u=0.6\n") != std::string::npos);
    CHECK(m2.find("wall.height=3\n") != std::string::npos);

    write_file_atomic(dir / "bad.txt", std::string_view("colour=blue\n"));
    CHECK(cli({"pipeline", p(dir / "plan.png"), p(dir / "d"), "--config", p(dir / "bad.txt")}).code == 5);
    CHECK(cli({"pipeline", p(dir / "plan.png"), p(dir / "d"), "--config", p(dir / "none.txt")}).code == 2);
    CHECK(cli({"pipeline"}).code == 5);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("palette override in config") {
    PipelineConfig cfg;
    cfg.apply("palette.wall=10,10,10\n");
    CHECK(cfg.palette[1].color == Rgb{10, 10, 10});
    CHECK_THROWS_AS(cfg.apply("palette.door=1,2\n"), Error);
    CHECK_THROWS_AS(cfg.apply("palette.door=0,0,0\n"), Error);  // collides with the new wall colour
}

TEST_CASE("augment batch") {
    const fs::path dir = fresh_dir("augment");
    const SegMask m = planvec::testing::synthetic_plan(6);
    save_mask_file(dir / "m.png", m);
    write_file_atomic(dir / "i.png", std::span<const std::uint8_t>(encode_png(encode_mask(m))));
    write_file_atomic(dir / "spec.txt", std::string_view("hflip=true\nrotations=90\nseed=3\n"));
    write_file_atomic(dir / "list.txt", std::string_view("i.png m.png out/i0.png out/m0.png\ni.png m.png out/i1.png out/m1.png\n"));
    const Run r = cli({"augment", p(dir / "list.txt"), "--spec", p(dir / "spec.txt"), "--threads", "2"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "out" / "m1.png"));
    const SegMask a = load_mask_file(dir / "out" / "m0.png");
    const RasterFile ia = read_png_file(dir / "out" / "i0.png");
    CHECK(ia.rgb.same_shape(a));
    CHECK(decode_mask(ia.rgb) == a);  // image was the encoded mask, so flips/rotations keep them aligned
}
