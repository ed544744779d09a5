#include <doctest.h>

#include "planvec/raster.hpp"
#include "planvec/svg_annotations.hpp"
#include "planvec/xml.hpp"

using namespace planvec;

TEST_CASE("xml parser basics") {
    const auto root = xml::parse(R"(<?xml version="1.0"?>
<!DOCTYPE svg>
<svg a='1' b="x &amp; y"><!-- c --><g><![CDATA[<raw>]]></g><p/></svg>)");
    CHECK(root.name == "svg");
    REQUIRE(root.attribute("b") != nullptr);
    CHECK(*root.attribute("b") == "x & y");
    REQUIRE(root.children.size() == 2);
    CHECK(root.children[1].name == "p");
    CHECK(root.line == 3);
}

TEST_CASE("malformed xml reports line and column") {
    try {
        xml::parse("<svg>\n  <g>\n</svg>");
        FAIL("expected a parse error");
    } catch (const xml::ParseError& e) {
        CHECK(e.code() == ErrorCode::MalformedDocument);
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(xml::parse(""), xml::ParseError);
    CHECK_THROWS_AS(xml::parse("<a b=1/>"), xml::ParseError);
    CHECK_THROWS_AS(xml::parse("<a></a><b/>"), xml::ParseError);
}

TEST_CASE("polygon with a Wall class becomes one wall shape") {
    const auto doc = parse_annotation(R"(<svg><polygon class="Wall" points="0,0 4,0 4,4 0,4"/></svg>)");
    REQUIRE(doc.shapes.size() == 1);
    CHECK(doc.shapes[0].kind == ShapeKind::Wall);
    const auto& pts = std::get<std::vector<Point2>>(doc.shapes[0].geometry);
    CHECK(pts.size() == 4);
    CHECK(doc.skipped == 0);
}

TEST_CASE("circular column keeps center and radius") {
    const auto doc = parse_annotation(R"(<svg><circle class="Column" cx="10" cy="10" r="3"/></svg>)");
    REQUIRE(doc.shapes.size() == 1);
    CHECK(doc.shapes[0].kind == ShapeKind::Column);
    const auto& c = std::get<Circle>(doc.shapes[0].geometry);
    CHECK(c.center == Point2{10, 10});
    CHECK(c.radius == 3);
    CHECK(shape_class(ShapeKind::Column) == classes::kWall);
}

TEST_CASE("unknown element kinds are skipped and counted") {
    const auto doc = parse_annotation(R"(<svg><polygon class="Sofa" points="0,0 4,0 4,4"/></svg>)");
    CHECK(doc.shapes.empty());
    CHECK(doc.skipped == 1);
    const auto nested = parse_annotation(R"(<svg><g class="Wall"><g class="Chair"><rect width="2" height="2"/></g></g></svg>)");
    CHECK(nested.shapes.empty());
    CHECK(nested.skipped == 1);
}

TEST_CASE("class inheritance, transforms and custom vocabulary") {
    const auto doc = parse_annotation(
        R"svg(<svg viewBox="0 0 40 30"><g class="Space Door" transform="translate(10,5) scale(2)">
             <rect x="1" y="1" width="2" height="3"/></g></svg>)svg");
    REQUIRE(doc.shapes.size() == 1);
    CHECK(doc.shapes[0].kind == ShapeKind::Door);
    const auto& pts = std::get<std::vector<Point2>>(doc.shapes[0].geometry);
    CHECK(pts[0] == Point2{12, 7});
    CHECK(pts[2] == Point2{16, 13});
    CHECK(doc.width == 40);
    CHECK(doc.height == 30);

    const auto vocab = ShapeVocabulary::from_config("Sofa=Stairs\n");
    const auto custom = parse_annotation(R"(<svg><polygon class="Sofa" points="0,0 4,0 4,4"/></svg>)", vocab);
    REQUIRE(custom.shapes.size() == 1);
    CHECK(custom.shapes[0].kind == ShapeKind::Stairs);
    CHECK_THROWS_AS(ShapeVocabulary::from_config("Sofa=Couch\n"), Error);
}

TEST_CASE("invalid geometry is reported with its location") {
    auto code_of = [](const char* text) {
        try {
            parse_annotation(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code_of(R"(<svg><polygon class="Wall" points="0,0 4,0 4"/></svg>)") == ErrorCode::UnparseableGeometry);
    CHECK(code_of(R"(<svg><polygon class="Wall" points="0,0 4,0 8,0"/></svg>)") == ErrorCode::UnparseableGeometry);
    CHECK(code_of(R"(<svg><circle class="Wall" cx="1" cy="1" r="2"/></svg>)") == ErrorCode::UnparseableGeometry);
    CHECK(code_of(R"(<svg><path class="Wall" d="M0 0 L4 0 L4 4 Z M5 5 L6 5 L6 6 Z"/></svg>)") ==
          ErrorCode::UnparseableGeometry);
    CHECK(code_of(R"(<svg><path class="Wall" d="M0 0 C1 1 2 2 3 3"/></svg>)") == ErrorCode::UnparseableGeometry);
    CHECK(code_of("<svg><polygon class='Wall'") == ErrorCode::MalformedDocument);
    try {
        parse_annotation("<svg>\n <rect class=\"Wall\" width=\"-1\" height=\"2\"/></svg>");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("single wall rectangle fills exactly its pixels") {
    const std::vector<AnnotatedShape> shapes{
        {ShapeKind::Wall, std::vector<Point2>{{0, 0}, {5, 0}, {5, 5}, {0, 5}}}};
    const SegMask m = rasterize_annotations(shapes, 10, 10);
    int walls = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) {
            const bool inside = x <= 4 && y <= 4;
            CHECK(m.at(x, y) == (inside ? classes::kWall : classes::kBackground));
            walls += inside;
        }
    CHECK(walls == 25);
}

TEST_CASE("window is drawn over wall and dilated") {
    const std::vector<AnnotatedShape> shapes{
        {ShapeKind::Window, std::vector<Point2>{{3, 4}, {6, 4}, {6, 5}, {3, 5}}},
        {ShapeKind::Wall, std::vector<Point2>{{0, 3}, {10, 3}, {10, 6}, {0, 6}}}};
    const SegMask m = rasterize_annotations(shapes, 10, 10);
    int window = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) {
            const bool in_block = x >= 2 && x <= 6 && y >= 3 && y <= 5;
            if (in_block) CHECK(m.at(x, y) == classes::kWindow);
            window += m.at(x, y) == classes::kWindow;
        }
    CHECK(window == 15);  // 1x3 strip dilates to 3x5
    CHECK(m.at(1, 4) == classes::kWall);
    CHECK(m.at(7, 4) == classes::kWall);
}

TEST_CASE("shapes outside the canvas are clipped") {
    const std::vector<AnnotatedShape> shapes{
        {ShapeKind::Wall, std::vector<Point2>{{-5, -5}, {2, -5}, {2, 2}, {-5, 2}}}};
    const SegMask m = rasterize_annotations(shapes, 4, 4);
    CHECK(m.at(0, 0) == classes::kWall);
    CHECK(m.at(1, 1) == classes::kWall);
    CHECK(m.at(2, 2) == classes::kBackground);
    try {
        rasterize_annotations(shapes, 0, 4);
        FAIL("expected ZeroAreaCanvas");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroAreaCanvas);
    }
}

TEST_CASE("drawing order ranks") {
    CHECK(drawing_order(ShapeKind::Wall) == 1);
    CHECK(drawing_order(ShapeKind::Column) == 1);
    CHECK(drawing_order(ShapeKind::Stairs) == 2);
    CHECK(drawing_order(ShapeKind::Railing) == 3);
    CHECK(drawing_order(ShapeKind::Door) == 4);
    CHECK(drawing_order(ShapeKind::Window) == 5);
}

TEST_CASE("raster primitives") {
    BinaryMask m(5, 5);
    fill_circle(m, {2.5, 2.5}, 1.0);
    int n = 0;
    for (auto v : m.data()) n += v;
    CHECK(n == 5);
    const BinaryMask d = dilate3x3(m);
    n = 0;
    for (auto v : d.data()) n += v;
    CHECK(n == 21);  // plus of 5 grows to the 5x5 minus its 4 corners
}
