#include <random>

#include "doctest.h"
#include "snowroad/segmentation.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace snowroad;
using test_support::code;
using test_support::error_code_of;
using test_support::random_mask;

namespace {

bool subset(const BinaryMask& a, const BinaryMask& b) { return (a - b).count() == 0; }

}  // namespace

TEST_CASE("snow classification") {
    HsvImage img(3, 1);
    img.at(0, 0, 1) = 10;
    img.at(0, 0, 2) = 240;
    img.at(1, 0, 1) = 200;
    img.at(1, 0, 2) = 240;
    img.at(2, 0, 0) = 170;
    img.at(2, 0, 1) = 30;
    img.at(2, 0, 2) = 150;
    const auto m = classify_snow(img, SnowThresholds{});
    CHECK(m.get(0, 0));
    CHECK_FALSE(m.get(1, 0));
    CHECK(m.get(2, 0));
}

TEST_CASE("classification is pixelwise") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> byte(0, 255);
    HsvImage img(10, 10);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(byte(rng));
    const auto before = classify_snow(img, {});
    HsvImage swapped = img;
    for (int c = 0; c < 3; ++c) std::swap(swapped.at(1, 2, c), swapped.at(7, 8, c));
    auto expected = before;
    expected.set(1, 2, before.get(7, 8));
    expected.set(7, 8, before.get(1, 2));
    CHECK(classify_snow(swapped, {}) == expected);
}

TEST_CASE("structuring element must have odd sides") {
    CHECK(error_code_of([] { StructuringElement{4, 5}.validate(); }) == code(ErrorCode::InvalidParameter));
    CHECK(error_code_of([] { erode(BinaryMask(3, 3), StructuringElement{0, 1}); }) ==
          code(ErrorCode::InvalidParameter));
}

TEST_CASE("primitive examples") {
    const StructuringElement se3{3, 3};
    const auto eroded = erode(BinaryMask(6, 5, true), se3);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 6; ++x) CHECK(eroded.get(x, y) == (x > 0 && y > 0 && x < 5 && y < 4));
    }

    BinaryMask dot(6, 5);
    dot.set(2, 2, true);
    CHECK(erode(dot, se3).count() == 0);
    const auto grown = dilate(dot, se3);
    CHECK(grown.count() == 9);
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) CHECK(grown.get(x, y));
    }

    BinaryMask corner(6, 5);
    corner.set(0, 0, true);
    CHECK(dilate(corner, se3).count() == 4);
    CHECK(dilate(BinaryMask(6, 5), se3).count() == 0);
}

TEST_CASE("primitives match brute-force oracles") {
    std::mt19937_64 rng(31);
    const StructuringElement shapes[] = {{1, 1}, {3, 3}, {5, 5}, {3, 7}, {7, 1}};
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = random_mask(rng, 32, 32, trial % 2 ? 0.5 : 0.85);
        for (const auto& se : shapes) {
            const int rx = se.radius_x(), ry = se.radius_y();
            REQUIRE(erode(m, se) == oracle::erode(m, rx, ry));
            REQUIRE(dilate(m, se) == oracle::dilate(m, rx, ry));
            REQUIRE(opening(m, se) == oracle::dilate(oracle::erode(m, rx, ry), rx, ry));
            REQUIRE(closing(m, se) == oracle::closing(m, rx, ry));
        }
    }
}

TEST_CASE("duality, ordering and idempotence") {
    std::mt19937_64 rng(32);
    const StructuringElement se{5, 3};
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = random_mask(rng, 32, 32, 0.6);
        const auto d = dilate(m, se);
        const auto dual = ~erode(~m, se);
        for (int y = se.radius_y(); y < 32 - se.radius_y(); ++y) {
            for (int x = se.radius_x(); x < 32 - se.radius_x(); ++x) CHECK(d.get(x, y) == dual.get(x, y));
        }
        CHECK(subset(erode(m, se), m));
        CHECK(subset(m, dilate(m, se)));
        CHECK(subset(opening(m, se), m));
        CHECK(subset(m, closing(m, se)));

        const auto o = opening(m, se);
        CHECK(opening(o, se) == o);
        const auto c = closing(m, se);
        CHECK(closing(c, se) == c);
    }
}

TEST_CASE("closing keeps regions that touch the frame") {
    BinaryMask band(20, 10);
    for (int y = 6; y < 10; ++y) {
        for (int x = 0; x < 20; ++x) band.set(x, y, true);
    }
    CHECK(closing(band, StructuringElement{5, 5}) == band);
    CHECK(open_close(band, StructuringElement{3, 3}) == band);
}

TEST_CASE("open_close examples") {
    const StructuringElement se5{5, 5};
    BinaryMask speck(16, 16);
    for (int y = 6; y < 9; ++y) {
        for (int x = 6; x < 10; ++x) speck.set(x, y, true);
    }
    CHECK(open_close(speck, se5).count() == 0);

    BinaryMask rect(26, 26);
    for (int y = 3; y < 23; ++y) {
        for (int x = 3; x < 23; ++x) rect.set(x, y, true);
    }
    const StructuringElement se3{3, 3};
    const auto oc = open_close(rect, se3);
    CHECK(oc == oracle::closing(oracle::dilate(oracle::erode(rect, 1, 1), 1, 1), 1, 1));
    CHECK(oc == rect);

    BinaryMask holed(16, 16, true);
    for (int y = 6; y < 9; ++y) {
        for (int x = 6; x < 9; ++x) holed.set(x, y, false);
    }
    CHECK(open_close(holed, se5) == BinaryMask(16, 16, true));
}

TEST_CASE("open_close removes isolated components smaller than the element") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> size(1, 4);
    const StructuringElement se{5, 5};
    for (int trial = 0; trial < 50; ++trial) {
        BinaryMask m(40, 40);
        BinaryMask big(40, 40);
        for (int y = 25; y < 40; ++y) {
            for (int x = 0; x < 40; ++x) big.set(x, y, true);
        }
        m = big;
        // Specks on a 10 px lattice stay at least 5 px apart from each other
        // and from the big block.
        for (int gy = 0; gy < 2; ++gy) {
            for (int gx = 0; gx < 4; ++gx) {
                const int w = size(rng), h = size(rng);
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) {
                        if (rng() % 4 != 0 || (x == 0 && y == 0)) m.set(2 + gx * 10 + x, 2 + gy * 10 + y, true);
                    }
                }
            }
        }
        CHECK(open_close(m, se) == big);
    }
}
