#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdrbench/crf.hpp"
#include "hdrbench/synth.hpp"

using namespace hdrbench;

TEST_CASE("identity curve maps every sample to itself") {
    Crf id = identity_crf();
    CHECK(id.grid_size() == kCrfGridSize);
    CHECK(apply_crf(0.0, id) == 0.0);
    CHECK(apply_crf(1.0, id) == 1.0);
    CHECK(apply_crf(0.3173, id) == doctest::Approx(0.3173).epsilon(1e-12));
}

TEST_CASE("lookup interpolates linearly between grid samples") {
    Crf c;
    c.name = "two_point";
    c.samples = {0.0, 1.0};
    CHECK(apply_crf(0.25, c) == doctest::Approx(0.25).epsilon(1e-12));
    c.samples = {0.0, 0.5, 1.0};
    CHECK(apply_crf(0.25, c) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(apply_crf(0.75, c) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("dorf parser reads marker-delimited records and normalizes them") {
    std::stringstream text;
    text << "curve_a\nsome ignored metadata\n";
    text << "I = 0.0 0.25 0.5 0.75 1.0\n";
    text << "B = 0.1 0.3  0.55 0.8 0.9\n";   // offsets force renormalization
    text << "\ncurve_b\n";
    text << "I = 0.0 0.5 1.0\n";
    text << "B = 0.0 0.8 0.6\n";             // non-monotone tail
    CrfDatabase db = parse_dorf(text);
    REQUIRE(db.curves.size() == 2);
    for (const Crf& c : db.curves) {
        CHECK(c.grid_size() == kCrfGridSize);
        CHECK(c.samples.front() == doctest::Approx(0.0));
        CHECK(c.samples.back() == doctest::Approx(1.0));
        for (int i = 1; i < c.grid_size(); ++i)
            CHECK(c.samples[i] >= c.samples[i - 1]);
    }
    CHECK(db.curves[0].name == "curve_a");
    CHECK_FALSE(db.curves[0].projected);
    CHECK(db.curves[1].projected);  // cumulative-max projection had to act
}

TEST_CASE("synthetic response database parses to the requested curve count") {
    auto path = std::filesystem::temp_directory_path() / "hdrbench_dorf_test.txt";
    write_synthetic_dorf(path.string(), 201);
    CrfDatabase db = load_dorf(path.string());
    CHECK(db.curves.size() == 201);
    for (const Crf& c : db.curves) {
        CHECK(c.grid_size() == kCrfGridSize);
        for (int i = 1; i < c.grid_size(); ++i)
            CHECK(c.samples[i] >= c.samples[i - 1]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("inverse round trip stays within 2/1024 across the database") {
    auto path = std::filesystem::temp_directory_path() / "hdrbench_dorf_inv_test.txt";
    write_synthetic_dorf(path.string(), 64);
    CrfDatabase db = load_dorf(path.string());
    const double tol = 2.0 / kCrfGridSize;
    for (const Crf& c : db.curves) {
        Crf inv = invert_crf(c);
        double worst = 0.0;
        for (int i = 0; i <= 500; ++i) {
            double x = static_cast<double>(i) / 500.0;
            worst = std::max(worst, std::abs(apply_crf(apply_crf(x, c), inv) - x));
        }
        CHECK(worst <= tol);
    }
    std::filesystem::remove(path);
}

TEST_CASE("mean curve selection returns the member nearest the pointwise mean") {
    std::stringstream text;
    for (double g : {0.5, 0.7, 1.0}) {
        text << "gamma_" << g << "\nI =";
        for (int i = 0; i < 33; ++i) text << " " << static_cast<double>(i) / 32.0;
        text << "\nB =";
        for (int i = 0; i < 33; ++i) text << " " << std::pow(static_cast<double>(i) / 32.0, g);
        text << "\n";
    }
    CrfDatabase db = parse_dorf(text);
    REQUIRE(db.curves.size() == 3);
    // The pointwise mean of the three gammas sits closest to the middle one.
    CHECK(mean_crf(db).name == db.curves[1].name);
}

TEST_CASE("clahe tone curve is monotone on [0,1] with unit endpoints") {
    HdrImage exposed(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            double v = 0.001 + 0.999 * (static_cast<double>(x * 64 + y) / 4095.0);
            v = v * v;  // skew mass toward the dark end
            for (int c = 0; c < 3; ++c) exposed.px(x, y)[c] = v;
        }
    Crf curve = clahe_crf(exposed);
    CHECK(curve.samples.front() == doctest::Approx(0.0));
    CHECK(curve.samples.back() == doctest::Approx(1.0));
    for (int i = 1; i < curve.grid_size(); ++i)
        CHECK(curve.samples[i] >= curve.samples[i - 1]);
}

TEST_CASE("clahe on log-uniform luminance approaches the log ramp") {
    // Log-uniform content fills every histogram bin equally, so the
    // equalized curve must match the normalized log position.
    ClaheParams params;
    params.bins = 256;
    params.log_floor = 1e-4;
    const int n = 512 * 512;
    HdrImage exposed(512, 512);
    for (int i = 0; i < n; ++i) {
        double t = (static_cast<double>(i) + 0.5) / n;
        double v = std::pow(10.0, -4.0 * (1.0 - t));  // log10 v uniform in [-4, 0]
        for (int c = 0; c < 3; ++c) exposed.pixels[3 * i + c] = v;
    }
    Crf curve = clahe_crf(exposed, params);
    const double tol = 3.0 / params.bins;
    for (double v : {1e-3, 1e-2, 0.1, 0.5, 0.9}) {
        double expected = (std::log10(v) + 4.0) / 4.0;
        CHECK(std::abs(apply_crf(v, curve) - expected) <= tol);
    }
}

TEST_CASE("curve csv lists one row per grid sample") {
    Crf id = identity_crf(8);
    auto path = std::filesystem::temp_directory_path() / "hdrbench_crf_test.csv";
    write_crf_csv(id, path.string());
    std::ifstream f(path);
    REQUIRE(f.good());
    int rows = 0;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);  // header plus 8 samples
    std::filesystem::remove(path);
}
