#pragma once

#include <cstdint>
#include <string>

#include "hdrbench/crf.hpp"
#include "hdrbench/image.hpp"

namespace hdrbench {

// Gaussian approximation of photon-plus-read noise in relative units:
// sigma^2(v) = k_signal * v + sigma_read^2.
struct NoiseParams {
    double k_signal = 4e-3;
    double sigma_read = 1e-3;
    bool enabled = true;
};

enum class CrfMode { Identity, Static, Clahe };

struct CameraConfig {
    CrfMode crf_mode = CrfMode::Static;
    Crf static_crf;                 // used when crf_mode == Static
    ClaheParams clahe;              // used when crf_mode == Clahe
    double clip_fraction = 0.05;    // strictly inside (0,1)
    NoiseParams noise;
    int bit_depth = 8;
    std::uint64_t seed = 0;
};

// Everything needed to replay one simulated capture.
struct SimulationMeta {
    std::string scene_id;
    double exposure_e = 1.0;
    double clip_point = 1.0;        // 1/e in scene units
    double clip_fraction = 0.05;
    Crf crf_used;
    NoiseParams noise;
    int bit_depth = 8;
    std::uint64_t seed = 0;         // per-scene seed, as applied
};

// Deterministic per-scene stream: global seed mixed with a hash of scene_id.
std::uint64_t mix_seed(std::uint64_t global_seed, const std::string& scene_id);

// e = 1 / percentile(maxRGB, 100 * (1 - f)); clips at least a fraction f of
// the brightest pixels.
double select_exposure(const HdrImage& h, double clip_fraction);

// Additive Gaussian sample per component, clamped at zero. Row-major
// traversal, componentwise; identical output for identical seeds.
HdrImage add_noise(const HdrImage& exposed, const NoiseParams& params, std::uint64_t rng_seed);

double quantize(double value, int bits);
LdrImage quantize(const HdrImage& clipped, int bits);

// The full forward model: exposure, noise, clipping, CRF, quantization.
std::pair<LdrImage, SimulationMeta> simulate(const HdrImage& h, const CameraConfig& cfg,
                                             const std::string& scene_id);

std::string meta_to_json(const SimulationMeta& meta);
SimulationMeta meta_from_json(const std::string& text);
void write_meta(const SimulationMeta& meta, const std::string& path);
SimulationMeta load_meta(const std::string& path);

}  // namespace hdrbench
