#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hdrbench/image.hpp"

using namespace hdrbench;

TEST_CASE("pixel indexing is row-major with three channels") {
    HdrImage img(4, 3, 0.0);
    CHECK(img.pixel_count() == 12);
    CHECK(img.pixels.size() == 36);
    img.px(2, 1)[0] = 7.0;
    CHECK(img.pixels[3 * (1 * 4 + 2) + 0] == 7.0);
}

TEST_CASE("validate rejects non-finite and negative components") {
    HdrImage img(2, 2, 0.5);
    CHECK_NOTHROW(img.validate());
    img.px(0, 0)[1] = -1e-9;
    CHECK_THROWS_AS(img.validate(), std::runtime_error);
    img.px(0, 0)[1] = std::nan("");
    CHECK_THROWS_AS(img.validate(), std::runtime_error);
    img.px(0, 0)[1] = 0.0;
    img.pixels.pop_back();
    CHECK_THROWS_AS(img.validate(), std::runtime_error);
}

TEST_CASE("luminance uses Rec.709 weights") {
    HdrImage img(1, 1);
    img.px(0, 0)[0] = 1.0;
    img.px(0, 0)[1] = 0.0;
    img.px(0, 0)[2] = 0.0;
    CHECK(luminance(img).values[0] == doctest::Approx(0.2126).epsilon(1e-12));
    img.px(0, 0)[1] = 1.0;
    img.px(0, 0)[2] = 1.0;
    CHECK(luminance(img).values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("channel_max picks the dominant channel per pixel") {
    HdrImage img(2, 1);
    img.px(0, 0)[0] = 0.1;
    img.px(0, 0)[1] = 0.9;
    img.px(0, 0)[2] = 0.3;
    img.px(1, 0)[0] = 2.0;
    img.px(1, 0)[1] = 0.0;
    img.px(1, 0)[2] = 0.0;
    LumaMap m = channel_max(img);
    CHECK(m.values[0] == 0.9);
    CHECK(m.values[1] == 2.0);
    CHECK(max_component(img) == 2.0);
}

TEST_CASE("percentile is nearest-rank with a 1-based ceiling index") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(static_cast<double>(i));
    CHECK(percentile(v, 95.0) == 95.0);   // ceil(95) = 95th element
    CHECK(percentile(v, 90.0) == 90.0);
    CHECK(percentile(v, 94.1) == 95.0);   // ceil(94.1) = 95
    CHECK(percentile(v, 50.0) == 50.0);
    CHECK(percentile({3.0}, 50.0) == 3.0);
    // Order of the input must not matter.
    CHECK(percentile({5.0, 1.0, 3.0, 2.0, 4.0}, 60.0) == 3.0);
    CHECK_THROWS_AS(percentile({}, 50.0), std::runtime_error);
    CHECK_THROWS_AS(percentile({1.0}, 0.0), std::runtime_error);
    CHECK_THROWS_AS(percentile({1.0}, 100.5), std::runtime_error);
}

TEST_CASE("scale_exposure multiplies every component") {
    HdrImage img(2, 2, 0.25);
    HdrImage out = scale_exposure(img, 4.0);
    for (double v : out.pixels) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resize_center_crop returns the exact target raster") {
    HdrImage img(64, 48, 0.5);
    HdrImage out = resize_center_crop(img, 32, 32);
    CHECK(out.width == 32);
    CHECK(out.height == 32);
    // A constant image survives bilinear filtering unchanged.
    for (double v : out.pixels) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("resize_center_crop keeps a ramp monotone and in range") {
    HdrImage img(40, 20);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 40; ++x)
            for (int c = 0; c < 3; ++c) img.px(x, y)[c] = static_cast<double>(x);
    HdrImage out = resize_center_crop(img, 16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 1; x < 16; ++x)
            CHECK(out.px(x, y)[0] >= out.px(x - 1, y)[0]);
    for (double v : out.pixels) {
        CHECK(v >= 0.0);
        CHECK(v <= 39.0);
    }
    // Upscale path: 8x8 -> 32x32 must also land exactly on target.
    HdrImage small(8, 8, 1.5);
    HdrImage up = resize_center_crop(small, 32, 32);
    CHECK(up.width == 32);
    CHECK(up.height == 32);
    for (double v : up.pixels) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
}
