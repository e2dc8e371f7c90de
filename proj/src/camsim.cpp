#include "hdrbench/camsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hdrbench {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Box-Muller on mt19937_64 uniforms; kept in-house so streams are identical
// across standard libraries.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    double uniform_open() {
        // (0,1]: avoids log(0).
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t global_seed, const std::string& scene_id) {
    return splitmix64(global_seed ^ splitmix64(fnv1a64(scene_id)));
}

double select_exposure(const HdrImage& h, double clip_fraction) {
    if (!(clip_fraction > 0.0 && clip_fraction < 1.0))
        throw std::runtime_error("select_exposure: clip fraction must lie in (0,1)");
    const LumaMap peaks = channel_max(h);
    const double ref = percentile(peaks.values, 100.0 * (1.0 - clip_fraction));
    if (!(ref > 0.0))
        throw std::runtime_error("select_exposure: image is all zero at the clip percentile");
    return 1.0 / ref;
}

HdrImage add_noise(const HdrImage& exposed, const NoiseParams& params, std::uint64_t rng_seed) {
    if (!params.enabled || (params.k_signal == 0.0 && params.sigma_read == 0.0))
        return exposed;
    HdrImage out = exposed;
    GaussianStream gauss(rng_seed);
    for (double& v : out.pixels) {
        const double variance = params.k_signal * v + params.sigma_read * params.sigma_read;
        v = std::max(0.0, v + std::sqrt(variance) * gauss.next());
    }
    return out;
}

double quantize(double value, int bits) {
    const double levels = static_cast<double>((1u << bits) - 1u);
    return std::round(value * levels) / levels;
}

LdrImage quantize(const HdrImage& clipped, int bits) {
    LdrImage out(clipped.width, clipped.height, bits);
    const double levels = static_cast<double>((1u << bits) - 1u);
    for (std::size_t i = 0; i < clipped.pixels.size(); ++i)
        out.pixels[i] = std::round(clipped.pixels[i] * levels) / levels;
    return out;
}

std::pair<LdrImage, SimulationMeta> simulate(const HdrImage& h, const CameraConfig& cfg,
                                             const std::string& scene_id) {
    if (cfg.bit_depth < 2 || cfg.bit_depth > 16)
        throw std::runtime_error("simulate: bit depth out of range [2,16]");
    const double e = select_exposure(h, cfg.clip_fraction);
    HdrImage exposed = scale_exposure(h, e);

    SimulationMeta meta;
    meta.scene_id = scene_id;
    meta.exposure_e = e;
    meta.clip_point = 1.0 / e;
    meta.clip_fraction = cfg.clip_fraction;
    meta.noise = cfg.noise;
    meta.bit_depth = cfg.bit_depth;
    meta.seed = mix_seed(cfg.seed, scene_id);

    // The CLAHE curve is a property of the pipeline, so it is derived from the
    // clipped noiseless exposure rather than from one noise draw.
    Crf crf;
    switch (cfg.crf_mode) {
        case CrfMode::Identity:
            crf = identity_crf();
            break;
        case CrfMode::Static:
            if (cfg.static_crf.grid_size() < 2)
                throw std::runtime_error("simulate: static CRF not set");
            crf = cfg.static_crf;
            break;
        case CrfMode::Clahe: {
            HdrImage noiseless = exposed;
            for (double& v : noiseless.pixels) v = std::min(1.0, v);
            crf = clahe_crf(noiseless, cfg.clahe);
            break;
        }
    }
    meta.crf_used = crf;

    HdrImage signal = add_noise(exposed, cfg.noise, meta.seed);
    for (double& v : signal.pixels) v = std::clamp(v, 0.0, 1.0);
    if (cfg.crf_mode != CrfMode::Identity) signal = apply_crf(signal, crf);
    return {quantize(signal, cfg.bit_depth), meta};
}

std::string meta_to_json(const SimulationMeta& meta) {
    nlohmann::json j;
    j["scene_id"] = meta.scene_id;
    j["exposure_e"] = meta.exposure_e;
    j["clip_point"] = meta.clip_point;
    j["clip_fraction"] = meta.clip_fraction;
    j["crf_name"] = meta.crf_used.name;
    j["crf_samples"] = meta.crf_used.samples;
    j["crf_projected"] = meta.crf_used.projected;
    j["noise"] = {{"k_signal", meta.noise.k_signal},
                  {"sigma_read", meta.noise.sigma_read},
                  {"enabled", meta.noise.enabled}};
    j["bit_depth"] = meta.bit_depth;
    j["seed"] = meta.seed;
    return j.dump(2) + "\n";
}

SimulationMeta meta_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SimulationMeta meta;
    meta.scene_id = j.at("scene_id").get<std::string>();
    meta.exposure_e = j.at("exposure_e").get<double>();
    meta.clip_point = j.at("clip_point").get<double>();
    meta.clip_fraction = j.at("clip_fraction").get<double>();
    meta.crf_used.name = j.at("crf_name").get<std::string>();
    meta.crf_used.samples = j.at("crf_samples").get<std::vector<double>>();
    meta.crf_used.projected = j.at("crf_projected").get<bool>();
    meta.noise.k_signal = j.at("noise").at("k_signal").get<double>();
    meta.noise.sigma_read = j.at("noise").at("sigma_read").get<double>();
    meta.noise.enabled = j.at("noise").at("enabled").get<bool>();
    meta.bit_depth = j.at("bit_depth").get<int>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    return meta;
}

void write_meta(const SimulationMeta& meta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << meta_to_json(meta);
}

SimulationMeta load_meta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return meta_from_json(ss.str());
}

}  // namespace hdrbench
