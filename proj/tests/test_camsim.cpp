#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hdrbench/camsim.hpp"
#include "hdrbench/synth.hpp"

using namespace hdrbench;

namespace {

HdrImage ramp_image(int n) {
    // maxRGB takes the values 1..n exactly once.
    HdrImage img(n, 1);
    for (int x = 0; x < n; ++x)
        for (int c = 0; c < 3; ++c) img.px(x, 0)[c] = (x + 1) * (c == 0 ? 1.0 : 0.5);
    return img;
}

}  // namespace

TEST_CASE("per-scene seeds are deterministic and distinct") {
    CHECK(mix_seed(1, "scene_01") == mix_seed(1, "scene_01"));
    CHECK(mix_seed(1, "scene_01") != mix_seed(1, "scene_02"));
    CHECK(mix_seed(1, "scene_01") != mix_seed(2, "scene_01"));
}

TEST_CASE("exposure picks the nearest-rank clip point") {
    HdrImage img = ramp_image(100);
    // 5% clip: the 95th of 100 sorted maxima is 95, so e = 1/95.
    CHECK(select_exposure(img, 0.05) == doctest::Approx(1.0 / 95.0).epsilon(1e-12));
    CHECK(select_exposure(img, 0.10) == doctest::Approx(1.0 / 90.0).epsilon(1e-12));
    CHECK_THROWS_AS(select_exposure(img, 0.0), std::runtime_error);
    CHECK_THROWS_AS(select_exposure(img, 1.0), std::runtime_error);
}

TEST_CASE("noise is reproducible, seed-sensitive, and disabled cleanly") {
    HdrImage exposed(32, 32, 0.5);
    NoiseParams p;
    HdrImage a = add_noise(exposed, p, 42);
    HdrImage b = add_noise(exposed, p, 42);
    HdrImage c = add_noise(exposed, p, 43);
    CHECK(a.pixels == b.pixels);
    CHECK(a.pixels != c.pixels);

    p.enabled = false;
    HdrImage off = add_noise(exposed, p, 42);
    CHECK(off.pixels == exposed.pixels);
}

TEST_CASE("noise variance matches sigma^2 = k*v + sigma_read^2 within 5%") {
    // v = 0.5 keeps the zero clamp eleven sigmas away.
    const double v = 0.5;
    NoiseParams p;  // defaults: k_signal 4e-3, sigma_read 1e-3
    HdrImage exposed(640, 521, v);
    HdrImage noisy = add_noise(exposed, p, 7);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < noisy.pixels.size(); ++i) {
        double d = noisy.pixels[i] - v;
        sum += d;
        sum2 += d * d;
    }
    double n = static_cast<double>(noisy.pixels.size());
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    double expected = p.k_signal * v + p.sigma_read * p.sigma_read;
    CHECK(std::abs(var - expected) / expected <= 0.05);
    CHECK(std::abs(mean) <= 3.0 * std::sqrt(expected / n));
}

TEST_CASE("noise clamps at zero instead of going negative") {
    HdrImage exposed(64, 64, 1e-6);
    NoiseParams p;
    HdrImage noisy = add_noise(exposed, p, 11);
    for (double x : noisy.pixels) CHECK(x >= 0.0);
}

TEST_CASE("quantization error is bounded by half a step") {
    for (int bits : {2, 8, 12, 16}) {
        const double step = 1.0 / ((1 << bits) - 1);
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            double v = static_cast<double>(i) / 99999.0;
            double q = quantize(v, bits);
            worst = std::max(worst, std::abs(q - v));
            CHECK(quantize(q, bits) == q);  // lattice points are fixed points
        }
        CHECK(worst <= 0.5 * step + 1e-12);
    }
}

TEST_CASE("simulate composes exposure, clip, curve, and lattice") {
    HdrImage h = ramp_image(100);
    CameraConfig cfg;
    cfg.crf_mode = CrfMode::Identity;
    cfg.clip_fraction = 0.05;
    cfg.noise.enabled = false;
    cfg.bit_depth = 8;
    auto [ldr, meta] = simulate(h, cfg, "ramp");

    CHECK(meta.exposure_e == doctest::Approx(1.0 / 95.0).epsilon(1e-12));
    CHECK(meta.clip_point == doctest::Approx(95.0).epsilon(1e-12));
    CHECK(meta.bit_depth == 8);
    CHECK(meta.scene_id == "ramp");

    const double step = 1.0 / 255.0;
    for (int x = 0; x < 100; ++x)
        for (int c = 0; c < 3; ++c) {
            double expected = std::min(1.0, meta.exposure_e * h.px(x, 0)[c]);
            CHECK(std::abs(ldr.px(x, 0)[c] - expected) <= 0.5 * step + 1e-12);
            // Every component sits on the lattice.
            double k = ldr.px(x, 0)[c] / step;
            CHECK(std::abs(k - std::round(k)) <= 1e-9);
        }
    // The top 5% of pixels saturate.
    for (int x = 95; x < 100; ++x) CHECK(ldr.px(x, 0)[0] == 1.0);

    CHECK_THROWS_AS(([&] {
                        CameraConfig bad = cfg;
                        bad.bit_depth = 1;
                        simulate(h, bad, "ramp");
                    }()),
                    std::runtime_error);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    HdrImage h = synth_scene(123, 96, 64);
    CameraConfig cfg;
    cfg.crf_mode = CrfMode::Identity;
    cfg.seed = mix_seed(9, "s");
    auto [a, ma] = simulate(h, cfg, "s");
    auto [b, mb] = simulate(h, cfg, "s");
    CHECK(a.pixels == b.pixels);
    CHECK(ma.exposure_e == mb.exposure_e);

    cfg.seed = mix_seed(9, "other");
    auto [c, mc] = simulate(h, cfg, "other");
    CHECK(a.pixels != c.pixels);  // noise stream differs per scene
}

TEST_CASE("meta json round trip preserves every field") {
    SimulationMeta meta;
    meta.scene_id = "scene_03";
    meta.exposure_e = 0.0123456789;
    meta.clip_point = 1.0 / meta.exposure_e;
    meta.clip_fraction = 0.1;
    meta.crf_used = identity_crf(16);
    meta.crf_used.name = "identity16";
    meta.noise.k_signal = 8e-4;
    meta.noise.sigma_read = 5e-4;
    meta.bit_depth = 10;
    meta.seed = 0xDEADBEEFCAFEull;

    SimulationMeta back = meta_from_json(meta_to_json(meta));
    CHECK(back.scene_id == meta.scene_id);
    CHECK(back.exposure_e == meta.exposure_e);
    CHECK(back.clip_point == meta.clip_point);
    CHECK(back.clip_fraction == meta.clip_fraction);
    CHECK(back.crf_used.samples == meta.crf_used.samples);
    CHECK(back.crf_used.name == meta.crf_used.name);
    CHECK(back.noise.k_signal == meta.noise.k_signal);
    CHECK(back.noise.sigma_read == meta.noise.sigma_read);
    CHECK(back.noise.enabled == meta.noise.enabled);
    CHECK(back.bit_depth == meta.bit_depth);
    CHECK(back.seed == meta.seed);
}
