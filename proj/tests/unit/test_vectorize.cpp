#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "planvec/kdtree.hpp"
#include "planvec/metrics.hpp"
#include "planvec/vectorize.hpp"
#include "synthetic.hpp"

using namespace planvec;
using planvec::testing::fill_rect;

namespace {

BinaryMask solid(int w, int h, int x0, int y0, int x1, int y1) {
    BinaryMask m(w, h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.at(x, y) = 1;
    return m;
}

double area_of(const Polygon& p) { return std::abs(signed_area(p.vertices)); }

}  // namespace

TEST_CASE("convex hull and simplicity") {
    const std::vector<Point2> pts{{0, 0}, {2, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(signed_area(hull) == doctest::Approx(16));
    const std::vector<Point2> bowtie{{0, 0}, {4, 4}, {4, 0}, {0, 4}};
    CHECK_FALSE(is_simple_polygon(bowtie));
    CHECK(is_simple_polygon(hull));
}

TEST_CASE("kd-tree radius search equals a linear scan") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> d(0, 100);
    std::vector<Point2> pts(500);
    for (auto& p : pts) p = {std::round(d(rng)), std::round(d(rng))};
    const KdTree tree(pts);
    for (int q = 0; q < 100; ++q) {
        const Point2 query{d(rng), d(rng)};
        const double r = d(rng) / 5;
        std::vector<std::size_t> expected;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (distance(pts[i], query) <= r) expected.push_back(i);
        CHECK(tree.radius_search(query, r) == expected);
    }
}

TEST_CASE("min_area_rect examples") {
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const RotatedRect r1 = min_area_rect(square);
    CHECK(r1.area() == doctest::Approx(1.0));
    CHECK(r1.center.x == doctest::Approx(0.5));

    const std::vector<Point2> seg{{0, 0}, {4, 0}};
    const RotatedRect r2 = min_area_rect(seg);
    CHECK(r2.width == doctest::Approx(4));
    CHECK(r2.height == 0);

    const std::vector<Point2> diamond{{0, 0}, {2, 2}, {4, 0}, {2, -2}};
    const RotatedRect r3 = min_area_rect(diamond);
    CHECK(r3.area() == doctest::Approx(8));
    CHECK(std::fmod(r3.angle, std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 4));
    CHECK(oracle::rotation_scan_area(diamond) == doctest::Approx(8));

    try {
        min_area_rect(std::span<const Point2>{});
        FAIL("expected EmptyPointSet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyPointSet);
    }
}

TEST_CASE("min_area_rect encloses its points and beats every scanned direction") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> d(-20, 20);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> pts(3 + rng() % 30);
        for (auto& p : pts) p = {d(rng), d(rng)};
        const RotatedRect r = min_area_rect(pts);
        CHECK(r.width >= r.height);
        CHECK(r.angle >= 0);
        CHECK(r.angle < std::numbers::pi);
        for (const Point2& p : pts) {
            const Point2 q = p - r.center;
            CHECK(std::abs(dot(q, r.axis_long())) <= r.width / 2 + 1e-9);
            CHECK(std::abs(dot(q, r.axis_short())) <= r.height / 2 + 1e-9);
        }
        CHECK(r.area() <= oracle::rotation_scan_area(pts, 0.5) + 1e-9);
    }
}

TEST_CASE("fitting score") {
    const BinaryMask bar = solid(12, 6, 1, 1, 11, 5);
    const auto comps = connected_components(bar);
    const RotatedRect r = min_area_rect(pixel_corners(comps[0].pixels));
    CHECK(fitting_score(bar, r) == 1.0);
    CHECK(fitting_score(BinaryMask(12, 6), r) == 0.0);

    // 4x2 box over an L occupying 6 of its 8 cells.
    BinaryMask l = solid(4, 2, 0, 0, 4, 2);
    l.at(1, 1) = 0;
    l.at(2, 1) = 0;
    const RotatedRect box{{2, 1}, 4, 2, 0};
    CHECK(fitting_score(l, box) == 0.75);

    try {
        fitting_score(bar, RotatedRect{{2, 2}, 3, 0, 0});
        FAIL("expected ZeroAreaRect");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroAreaRect);
    }
}

TEST_CASE("split_component") {
    const auto bar = connected_components(solid(10, 2, 0, 0, 10, 2))[0];
    const RotatedRect r = min_area_rect(pixel_corners(bar.pixels));
    const auto [a, b] = split_component(bar, r);
    CHECK(a.pixels.size() == 10);
    CHECK(b.pixels.size() == 10);
    CHECK(std::all_of(a.pixels.begin(), a.pixels.end(), [](Pixel p) { return p.x < 5; }));

    // A rectangle that does not cut the component triggers the median split.
    const RotatedRect far{{100, 1}, 10, 2, 0};
    const auto [c, d] = split_component(bar, far);
    CHECK(c.pixels.size() == 10);
    CHECK(d.pixels.size() == 10);

    CHECK_THROWS_AS(split_component(Component{0, {{1, 1}}}, r), Error);
}

TEST_CASE("approximate_polygons") {
    SUBCASE("solid bar gives its bounding rectangle") {
        const auto set = approximate_polygons(solid(14, 8, 2, 2, 12, 6), 0.5);
        REQUIRE(set.polygons.size() == 1);
        CHECK(set.polygons[0].vertices.size() == 4);
        CHECK(area_of(set.polygons[0]) == doctest::Approx(40));
        CHECK_FALSE(set.polygons[0].fallback);
    }
    SUBCASE("L of two 10x4 bars") {
        BinaryMask l = solid(14, 10, 0, 0, 10, 4);
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 4; ++x) l.at(x, y) = 1;
        const auto set = approximate_polygons(l, 0.5);
        CHECK(set.polygons.size() >= 1);
        for (const Polygon& p : set.polygons) {
            if (p.fallback) continue;
            CHECK(fitting_score(l, min_area_rect(p.vertices)) >= 0.5);
        }
        // Every foreground pixel lies in some emitted polygon.
        const SegMask back = rasterize_polygons(set, 14, 10);
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 14; ++x)
                if (l.at(x, y)) CHECK_FALSE(back.at(x, y).is_background());
        // With a strict threshold the L must be split.
        CHECK(approximate_polygons(l, 0.9).polygons.size() >= 2);
    }
    SUBCASE("two disjoint squares") {
        BinaryMask m = solid(20, 10, 1, 1, 6, 6);
        for (int y = 2; y < 7; ++y)
            for (int x = 12; x < 17; ++x) m.at(x, y) = 1;
        CHECK(approximate_polygons(m, 0.5).polygons.size() == 2);
    }
    SUBCASE("empty mask and bad threshold") {
        CHECK(approximate_polygons(BinaryMask(5, 5), 0.5).polygons.empty());
        CHECK_THROWS_AS(approximate_polygons(BinaryMask(5, 5), 0.0), Error);
    }
    SUBCASE("threads do not change the result") {
        const SegMask plan = planvec::testing::synthetic_plan(3);
        const BinaryMask j = joint_mask(plan);
        const auto one = approximate_polygons(j, 0.5, {1});
        const auto four = approximate_polygons(j, 0.5, {4});
        REQUIRE(one.polygons.size() == four.polygons.size());
        for (std::size_t i = 0; i < one.polygons.size(); ++i) CHECK(one.polygons[i].vertices == four.polygons[i].vertices);
    }
}

TEST_CASE("refine merges near-coincident corners across polygons") {
    PolygonSet set;
    set.polygons.push_back({{{0, 0}, {10, 0}, {10, 10}, {0, 10}}, classes::kWall, false});
    set.polygons.push_back({{{13, 0}, {23, 0}, {23, 10}, {13, 10}}, classes::kWall, false});
    const PolygonSet out = refine_polygons(set, 4, std::cos(14 * std::numbers::pi / 180));
    REQUIRE(out.polygons.size() == 2);
    const auto& a = out.polygons[0].vertices;
    const auto& b = out.polygons[1].vertices;
    CHECK(std::count(a.begin(), a.end(), Point2{11.5, 0}) == 1);
    CHECK(std::count(b.begin(), b.end(), Point2{11.5, 0}) == 1);
    CHECK(std::count(a.begin(), a.end(), Point2{11.5, 10}) == 1);
    CHECK(std::count(b.begin(), b.end(), Point2{11.5, 10}) == 1);

    // Distance 5 > 4: untouched.
    PolygonSet apart;
    apart.polygons.push_back(set.polygons[0]);
    apart.polygons.push_back({{{15, 0}, {25, 0}, {25, 10}, {15, 10}}, classes::kWall, false});
    const PolygonSet kept = refine_polygons(apart, 4, 0.97);
    CHECK(kept.polygons[1].vertices.front().x >= 15);
}

TEST_CASE("refine removes nearly collinear vertices only") {
    const double eps_a = std::cos(14 * std::numbers::pi / 180);
    CHECK(eps_a == doctest::Approx(0.9703).epsilon(1e-4));
    const Point2 e1{5, 0.1}, e2{5, -0.1};
    CHECK(dot(e1, e2) / (norm(e1) * norm(e2)) >= eps_a);

    PolygonSet tri;
    tri.polygons.push_back({{{0, 0}, {5, 0.1}, {10, 0}, {10, 10}, {0, 10}}, classes::kWall, false});
    const auto out = refine_polygons(tri, 0, eps_a);
    REQUIRE(out.polygons.size() == 1);
    CHECK(std::count(out.polygons[0].vertices.begin(), out.polygons[0].vertices.end(), Point2{5, 0.1}) == 0);
    CHECK(out.polygons[0].vertices.size() == 4);

    PolygonSet right;
    right.polygons.push_back({{{0, 0}, {5, 0}, {5, 5}}, classes::kWall, false});
    const auto kept = refine_polygons(right, 0, eps_a);
    REQUIRE(kept.polygons.size() == 1);
    CHECK(kept.polygons[0].vertices.size() == 3);
    CHECK(signed_area(kept.polygons[0].vertices) > 0);
}

TEST_CASE("assign_classes majority and tie rules") {
    const Polygon box{{{0, 0}, {10, 0}, {10, 1}, {0, 1}}, classes::kBackground, false};
    PolygonSet set;
    set.polygons.push_back(box);

    SegMask pure(10, 1, classes::kWall);
    CHECK(assign_classes(set, pure).polygons.at(0).cls == classes::kWall);

    SegMask mixed(10, 1, classes::kWall);
    for (int x = 0; x < 4; ++x) mixed.at(x, 0) = classes::kWindow;
    CHECK(assign_classes(set, mixed).polygons.at(0).cls == classes::kWall);

    SegMask tie(10, 1, classes::kWall);
    for (int x = 0; x < 5; ++x) tie.at(x, 0) = classes::kWindow;
    CHECK(assign_classes(set, tie).polygons.at(0).cls == classes::kWall);

    CHECK(assign_classes(set, SegMask(10, 1)).polygons.empty());
}

TEST_CASE("vectorize_mask") {
    CHECK(vectorize_mask(SegMask(8, 8)).polygons.empty());

    SegMask one(20, 10);
    fill_rect(one, 2, 3, 18, 7, classes::kWall);
    const auto single = vectorize_mask(one);
    REQUIRE(single.polygons.size() == 1);
    CHECK(single.polygons[0].cls == classes::kWall);
    CHECK(single.polygons[0].vertices.size() == 4);

    // Three walls and a free-standing door. Walls are thicker than eps_d;
    // thinner ones get their opposite faces merged together.
    SegMask plan(120, 80);
    fill_rect(plan, 10, 10, 110, 20, classes::kWall);
    fill_rect(plan, 10, 20, 20, 70, classes::kWall);
    fill_rect(plan, 100, 20, 110, 70, classes::kWall);
    fill_rect(plan, 40, 60, 70, 70, classes::kDoor);
    const auto set = vectorize_mask(plan);
    CHECK(set.polygons.size() >= 4);
    const SegMask back = rasterize_polygons(set, 120, 80);
    const std::array<ClassId, 2> cls{classes::kWall, classes::kDoor};
    const MetricReport rep = report(confusion(back, plan, cls));
    // Corner pieces are accepted once half their rectangle is wall, so wall
    // IoU swings with the U's proportions (0.47 to 0.90 over thickness 6-12
    // and spans 40-200). Guaranteed: full coverage, and IoU >= 0.5 because
    // each piece is at least half foreground and the pieces are disjoint.
    CHECK(rep.rows[0].recall == 1.0);
    CHECK(rep.rows[0].iou >= 0.5);
    CHECK(rep.rows[1].iou == 1.0);

    // Deterministic.
    const auto again = vectorize_mask(plan);
    REQUIRE(again.polygons.size() == set.polygons.size());
    for (std::size_t i = 0; i < set.polygons.size(); ++i) CHECK(again.polygons[i].vertices == set.polygons[i].vertices);
}
