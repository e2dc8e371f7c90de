#pragma once

#include <string>

#include "hdrbench/camsim.hpp"
#include "hdrbench/image.hpp"

namespace hdrbench {

// Per-pixel blend weight isolating clipped regions, in [0,1].
struct AlphaMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

struct Reconstruction {
    HdrImage image;
    std::string method_id;
    SimulationMeta meta;
};

// alpha_c = max(0, L_c - 0.9) / 0.1 per channel, reduced over channels by max.
AlphaMap saturation_mask(const LdrImage& l);

// Perfect linearization, no highlight recovery: q(min{1, eH + noise}).
Reconstruction baseline_plin(const HdrImage& h, double e, const NoiseParams& noise, int bits,
                             std::uint64_t seed);

// Ground truth in saturated regions blended with the L^2 static inverse:
// alpha * (e*H) + (1 - alpha) * L^2.
Reconstruction baseline_prec(const HdrImage& h, const LdrImage& l, double e);

// L^2 with no recovery at all.
Reconstruction baseline_naive(const LdrImage& l);

}  // namespace hdrbench
