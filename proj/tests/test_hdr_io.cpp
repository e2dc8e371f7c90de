#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "hdrbench/hdr_io.hpp"

using namespace hdrbench;

namespace {

// Deterministic image with channel ratios below 2, spanning several stops.
HdrImage textured_image(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> mag(-3.0, 1.0);
    std::uniform_real_distribution<double> ratio(0.55, 1.0);
    HdrImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double base = std::pow(10.0, mag(rng));
            for (int c = 0; c < 3; ++c) img.px(x, y)[c] = base * ratio(rng);
        }
    return img;
}

double max_rel_error(const HdrImage& a, const HdrImage& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        double denom = std::max(a.pixels[i], 1e-12);
        worst = std::max(worst, std::abs(a.pixels[i] - b.pixels[i]) / denom);
    }
    return worst;
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("rgbe component codec follows the mantissa+0.5 convention") {
    double rgb[3];
    unsigned char black[4] = {12, 34, 56, 0};  // E = 0 means black
    rgbe_decode(black, rgb);
    CHECK(rgb[0] == 0.0);
    CHECK(rgb[1] == 0.0);
    CHECK(rgb[2] == 0.0);

    unsigned char px[4] = {128, 64, 32, 129};  // (m + 0.5) * 2^(129 - 136)
    rgbe_decode(px, rgb);
    CHECK(rgb[0] == doctest::Approx(128.5 / 128.0).epsilon(1e-12));
    CHECK(rgb[1] == doctest::Approx(64.5 / 128.0).epsilon(1e-12));
    CHECK(rgb[2] == doctest::Approx(32.5 / 128.0).epsilon(1e-12));
}

TEST_CASE("rgbe encode/decode round trip stays within 1% relative error") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> mag(-4.0, 4.0);
    std::uniform_real_distribution<double> ratio(0.5, 1.0);
    for (int i = 0; i < 20000; ++i) {
        double base = std::pow(10.0, mag(rng));
        double rgb[3] = {base * ratio(rng), base * ratio(rng), base * ratio(rng)};
        unsigned char enc[4];
        double back[3];
        rgbe_encode(rgb, enc);
        rgbe_decode(enc, back);
        for (int c = 0; c < 3; ++c)
            CHECK(std::abs(back[c] - rgb[c]) / rgb[c] <= 0.01);
    }
    // All-zero pixels map to the black code and back exactly.
    double z[3] = {0.0, 0.0, 0.0};
    unsigned char enc[4];
    rgbe_encode(z, enc);
    CHECK(enc[3] == 0);
    double back[3];
    rgbe_decode(enc, back);
    CHECK(back[0] == 0.0);
}

TEST_CASE("radiance stream round trip on an RLE-eligible width") {
    HdrImage img = textured_image(64, 16, 7);
    // Constant rows force long runs through the RLE encoder.
    for (int x = 0; x < 64; ++x)
        for (int c = 0; c < 3; ++c) img.px(x, 5)[c] = 0.125;
    std::stringstream buf;
    encode_radiance(img, buf);
    HdrImage back = decode_radiance(buf);
    CHECK(back.width == 64);
    CHECK(back.height == 16);
    CHECK(max_rel_error(img, back) <= 0.01);
}

TEST_CASE("radiance stream round trip on a width below the RLE minimum") {
    HdrImage img = textured_image(4, 4, 8);
    std::stringstream buf;
    encode_radiance(img, buf);
    HdrImage back = decode_radiance(buf);
    CHECK(back.width == 4);
    CHECK(max_rel_error(img, back) <= 0.01);
}

TEST_CASE("pfm stream round trip is exact at float precision") {
    HdrImage img = textured_image(23, 9, 11);
    std::stringstream buf;
    encode_pfm(img, buf);
    HdrImage back = decode_pfm(buf);
    CHECK(back.width == 23);
    CHECK(back.height == 9);
    CHECK(max_rel_error(img, back) <= 1e-6);
}

TEST_CASE("load_hdr detects the container by content, not extension") {
    HdrImage img = textured_image(16, 8, 13);
    auto hdr_path = temp_file("hdrbench_io_test.hdr");
    auto pfm_path = temp_file("hdrbench_io_test.pfm");
    write_hdr(img, hdr_path.string());
    write_pfm(img, pfm_path.string());
    CHECK(max_rel_error(img, load_hdr(hdr_path.string())) <= 0.01);
    CHECK(max_rel_error(img, load_hdr(pfm_path.string())) <= 1e-6);
    std::filesystem::remove(hdr_path);
    std::filesystem::remove(pfm_path);
}

TEST_CASE("ldr pfm round trip snaps back onto the quantization lattice") {
    LdrImage l(6, 4, 8);
    for (std::size_t i = 0; i < l.pixels.size(); ++i)
        l.pixels[i] = static_cast<double>((i * 37) % 256) / 255.0;
    auto path = temp_file("hdrbench_io_test_ldr.pfm");
    write_ldr_pfm(l, path.string());
    LdrImage back = load_ldr_pfm(path.string(), 8);
    CHECK(back.bit_depth == 8);
    for (std::size_t i = 0; i < l.pixels.size(); ++i)
        CHECK(back.pixels[i] == doctest::Approx(l.pixels[i]).epsilon(1e-12));
    std::filesystem::remove(path);
}

TEST_CASE("truncated streams are rejected") {
    HdrImage img = textured_image(16, 8, 17);
    std::stringstream buf;
    encode_radiance(img, buf);
    std::string bytes = buf.str();
    std::stringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(decode_radiance(cut), std::runtime_error);

    std::stringstream pbuf;
    encode_pfm(img, pbuf);
    std::string pbytes = pbuf.str();
    std::stringstream pcut(pbytes.substr(0, pbytes.size() / 2));
    CHECK_THROWS_AS(decode_pfm(pcut), std::runtime_error);
}
