#include "hdrbench/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdrbench {

AlphaMap saturation_mask(const LdrImage& l) {
    AlphaMap out;
    out.width = l.width;
    out.height = l.height;
    out.values.resize(l.pixel_count());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double* p = &l.pixels[3 * i];
        double a = 0.0;
        // Components at the clip value map to exactly 1; the ramp would land
        // one ulp short.
        for (int c = 0; c < 3; ++c)
            a = std::max(a, p[c] >= 1.0 ? 1.0 : std::max(0.0, p[c] - 0.9) / 0.1);
        out.values[i] = std::min(a, 1.0);
    }
    return out;
}

Reconstruction baseline_plin(const HdrImage& h, double e, const NoiseParams& noise, int bits,
                             std::uint64_t seed) {
    HdrImage signal = add_noise(scale_exposure(h, e), noise, seed);
    for (double& v : signal.pixels) v = std::clamp(v, 0.0, 1.0);
    const LdrImage q = quantize(signal, bits);

    Reconstruction rec;
    rec.method_id = "p-lin";
    rec.image = HdrImage(h.width, h.height);
    rec.image.pixels = q.pixels;
    rec.meta.exposure_e = e;
    rec.meta.clip_point = 1.0 / e;
    rec.meta.noise = noise;
    rec.meta.bit_depth = bits;
    rec.meta.seed = seed;
    return rec;
}

Reconstruction baseline_prec(const HdrImage& h, const LdrImage& l, double e) {
    if (h.width != l.width || h.height != l.height)
        throw std::runtime_error("baseline_prec: dimension mismatch between H and L");
    const AlphaMap alpha = saturation_mask(l);

    Reconstruction rec;
    rec.method_id = "p-rec";
    rec.image = HdrImage(h.width, h.height);
    rec.meta.exposure_e = e;
    rec.meta.clip_point = 1.0 / e;
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double a = alpha.values[i];
        const double* hp = &h.pixels[3 * i];
        const double* lp = &l.pixels[3 * i];
        double* q = &rec.image.pixels[3 * i];
        for (int c = 0; c < 3; ++c)
            q[c] = a * (e * hp[c]) + (1.0 - a) * (lp[c] * lp[c]);
    }
    return rec;
}

Reconstruction baseline_naive(const LdrImage& l) {
    Reconstruction rec;
    rec.method_id = "naive";
    rec.image = HdrImage(l.width, l.height);
    for (std::size_t i = 0; i < l.pixels.size(); ++i)
        rec.image.pixels[i] = l.pixels[i] * l.pixels[i];
    return rec;
}

}  // namespace hdrbench
