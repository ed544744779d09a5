#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "planvec/components.hpp"

using namespace planvec;

namespace {

BinaryMask from_rows(const std::vector<std::string>& rows) {
    BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) m.at(x, y) = rows[y][x] == '#';
    return m;
}

std::set<std::pair<int, int>> as_set(const std::vector<Pixel>& px) {
    std::set<std::pair<int, int>> s;
    for (const Pixel& p : px) s.insert({p.x, p.y});
    return s;
}

}  // namespace

TEST_CASE("connected components on small cases") {
    CHECK(connected_components(BinaryMask(6, 6)).empty());

    BinaryMask two(6, 6);
    two.at(0, 0) = 1;
    two.at(5, 5) = 1;
    const auto c2 = connected_components(two);
    REQUIRE(c2.size() == 2);
    CHECK(c2[0].pixels.size() == 1);
    CHECK(c2[1].pixels.size() == 1);

    const BinaryMask l = from_rows({"#...", "#...", "###.", "...."});
    const auto cl = connected_components(l);
    REQUIRE(cl.size() == 1);
    CHECK(cl[0].pixels.size() == 5);
    CHECK(as_set(cl[0].pixels) == oracle::flood_fill(l)[0]);
}

TEST_CASE("diagonal neighbours join under 8-connectivity") {
    const BinaryMask m = from_rows({"#..", ".#.", "..#"});
    CHECK(connected_components(m).size() == 1);
}

TEST_CASE("labelling agrees with a flood fill on random masks") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryMask m(1 + rng() % 20, 1 + rng() % 20);
        const unsigned density = 20 + rng() % 50;
        for (auto& v : m.data()) v = (rng() % 100) < density;
        const auto comps = connected_components(m);
        const auto expected = oracle::flood_fill(m);
        REQUIRE(comps.size() == expected.size());
        for (std::size_t i = 0; i < comps.size(); ++i) {
            CHECK(as_set(comps[i].pixels) == expected[i]);
            CHECK(comps[i].label == static_cast<int>(i));
            CHECK(std::is_sorted(comps[i].pixels.begin(), comps[i].pixels.end()));
        }
        // The span overload on all foreground pixels gives the same answer.
        std::vector<Pixel> all;
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                if (m.at(x, y)) all.push_back({x, y});
        const auto again = connected_components(std::span<const Pixel>(all));
        REQUIRE(again.size() == comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) CHECK(again[i].pixels == comps[i].pixels);
    }
}

TEST_CASE("contour tracing") {
    SUBCASE("single pixel") {
        Component c{0, {{4, 7}}};
        const Contour k = trace_contour(c);
        REQUIRE(k.points.size() == 1);
        CHECK(k.points[0] == Pixel{4, 7});
    }
    SUBCASE("3x3 square gives its 8 border pixels in order") {
        const auto comps = connected_components(from_rows({"###", "###", "###"}));
        const Contour k = trace_contour(comps[0]);
        REQUIRE(k.points.size() == 8);
        CHECK(as_set(k.points) == oracle::boundary_pixels(comps[0].pixels));
        const std::vector<Pixel> expected{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
        CHECK(k.points == expected);
    }
    SUBCASE("2x5 bar: every pixel is on the boundary") {
        const auto comps = connected_components(from_rows({"#####", "#####"}));
        const Contour k = trace_contour(comps[0]);
        CHECK(k.points.size() == 10);
        CHECK(as_set(k.points) == oracle::boundary_pixels(comps[0].pixels));
    }
}

TEST_CASE("contours of random blobs are closed 8-paths over boundary pixels") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMask m(12, 12);
        for (auto& v : m.data()) v = (rng() % 100) < 65;
        for (const auto& comp : connected_components(m)) {
            const Contour k = trace_contour(comp);
            REQUIRE_FALSE(k.points.empty());
            CHECK(k.points.front() == comp.pixels.front());
            const auto boundary = oracle::boundary_pixels(comp.pixels);
            for (std::size_t i = 0; i < k.points.size(); ++i) {
                const Pixel a = k.points[i];
                const Pixel b = k.points[(i + 1) % k.points.size()];
                CHECK(boundary.count({a.x, a.y}) == 1);
                if (k.points.size() > 1) CHECK((std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1));
            }
        }
    }
}
