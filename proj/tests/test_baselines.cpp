#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hdrbench/baselines.hpp"
#include "hdrbench/camsim.hpp"

using namespace hdrbench;

TEST_CASE("saturation mask ramps linearly over the top decile") {
    LdrImage l(4, 1, 8);
    auto set = [&](int x, double r, double g, double b) {
        l.px(x, 0)[0] = r;
        l.px(x, 0)[1] = g;
        l.px(x, 0)[2] = b;
    };
    set(0, 0.5, 0.5, 0.5);
    set(1, 0.9, 0.9, 0.9);
    set(2, 0.95, 0.2, 0.2);  // channel max drives the mask
    set(3, 1.0, 1.0, 1.0);
    AlphaMap a = saturation_mask(l);
    CHECK(a.values[0] == 0.0);
    CHECK(a.values[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.values[2] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(a.values[3] == 1.0);
}

TEST_CASE("perfect linearization is the quantized clipped exposure") {
    HdrImage h(8, 1);
    for (int x = 0; x < 8; ++x)
        for (int c = 0; c < 3; ++c) h.px(x, 0)[c] = 0.3 * (x + 1);
    const double e = 0.5;
    NoiseParams off;
    off.enabled = false;
    Reconstruction rec = baseline_plin(h, e, off, 8, 1);
    CHECK(rec.method_id == "p-lin");
    const double step = 1.0 / 255.0;
    for (int x = 0; x < 8; ++x) {
        double expected = std::min(1.0, e * h.px(x, 0)[0]);
        CHECK(std::abs(rec.image.px(x, 0)[0] - expected) <= 0.5 * step + 1e-12);
    }
    // With noise on, the same seed reproduces the same reconstruction.
    NoiseParams on;
    Reconstruction n1 = baseline_plin(h, e, on, 8, 77);
    Reconstruction n2 = baseline_plin(h, e, on, 8, 77);
    CHECK(n1.image.pixels == n2.image.pixels);
}

TEST_CASE("p-lin matches the identity-curve camera simulation bit for bit") {
    HdrImage h(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            for (int c = 0; c < 3; ++c)
                h.px(x, y)[c] = 0.01 + 0.02 * (y * 16 + x) + 0.003 * c;
    CameraConfig cfg;
    cfg.crf_mode = CrfMode::Identity;
    cfg.clip_fraction = 0.05;
    cfg.seed = 5;
    auto [ldr, meta] = simulate(h, cfg, "match");
    // meta.seed is the per-scene stream actually applied, not the global seed.
    Reconstruction rec =
        baseline_plin(h, meta.exposure_e, cfg.noise, cfg.bit_depth, meta.seed);
    CHECK(rec.image.pixels == ldr.pixels);
}

TEST_CASE("p-rec blends ground truth into saturated regions") {
    // Fully saturated pixel: alpha = 1, value = e*H regardless of L.
    HdrImage h(3, 1);
    LdrImage l(3, 1, 8);
    const double e = 0.5;
    for (int c = 0; c < 3; ++c) {
        h.px(0, 0)[c] = 8.0;
        l.px(0, 0)[c] = 1.0;
        // Mid blend: L = 0.95 gives alpha = 0.5; e*H = 4.0.
        h.px(1, 0)[c] = 8.0;
        l.px(1, 0)[c] = 0.95;
        // Unsaturated: alpha = 0, value = L^2.
        h.px(2, 0)[c] = 1.0;
        l.px(2, 0)[c] = 0.6;
    }
    Reconstruction rec = baseline_prec(h, l, e);
    CHECK(rec.method_id == "p-rec");
    CHECK(rec.image.px(0, 0)[0] == doctest::Approx(4.0).epsilon(1e-12));
    // 0.5 * 4.0 + 0.5 * 0.95^2
    CHECK(rec.image.px(1, 0)[0] == doctest::Approx(2.45125).epsilon(1e-9));
    CHECK(rec.image.px(2, 0)[0] == doctest::Approx(0.36).epsilon(1e-12));

    HdrImage wrong(2, 1);
    CHECK_THROWS_AS(baseline_prec(wrong, l, e), std::runtime_error);
}

TEST_CASE("naive inverse is the plain square") {
    LdrImage l(2, 1, 8);
    for (int c = 0; c < 3; ++c) {
        l.px(0, 0)[c] = 0.5;
        l.px(1, 0)[c] = 1.0;
    }
    Reconstruction rec = baseline_naive(l);
    CHECK(rec.method_id == "naive");
    CHECK(rec.image.px(0, 0)[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rec.image.px(1, 0)[0] == doctest::Approx(1.0).epsilon(1e-12));
}
