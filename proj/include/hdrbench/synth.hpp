#pragma once

#include <cstdint>
#include <string>

#include "hdrbench/image.hpp"

namespace hdrbench {

// Deterministic synthetic HDR scene: a dark-heavy smooth base in log space,
// mid-frequency texture, and a handful of bright highlight blobs. Channel
// ratios stay below 2 so shared-exponent storage is accurate, and highlights
// stay a few stops above the midtones so every clip level saturates them.
HdrImage synth_scene(std::uint64_t seed, int width, int height);

// Writes a response-curve database in the measured-curve text format: one
// named record per curve with "I =" and "B =" sample rows. Curves are strict
// monotone gamma and sigmoid families.
void write_synthetic_dorf(const std::string& path, int curve_count = 201);

// Scenes as Radiance .hdr, a curve database, and a ready-to-run config.json.
void write_demo_dataset(const std::string& dir, int scene_count, int width, int height,
                        std::uint64_t seed);

}  // namespace hdrbench
