#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hdrbench/camsim.hpp"
#include "hdrbench/crf.hpp"
#include "hdrbench/metrics.hpp"

namespace hdrbench {

// One named capture setup; curve is "mcrf", "clahe" or "identity".
struct CameraSpec {
    std::string crf = "mcrf";
    double clip_fraction = 0.05;
};

struct BenchConfig {
    std::string dataset_dir;
    std::vector<std::string> scene_list;  // explicit names win over the glob
    std::string scene_glob = "*";
    int target_width = 1024;
    int target_height = 768;
    std::string dorf_file;  // response-curve database, needed for "mcrf"

    std::map<std::string, CameraSpec> cameras;
    NoiseParams noise;
    int bit_depth = 8;
    ClaheParams clahe;

    DisplayModel display;
    bool shared_anchoring = false;  // default: each image anchored by itself
    PuEncoding pu;
    std::vector<std::string> metric_names = {"pu-psnr", "pu-ssim", "linear-psnr"};

    std::vector<std::string> synthesize_methods = {"p-lin", "p-rec", "naive"};
    std::map<std::string, std::string> external_methods;  // name -> directory

    std::uint64_t seed = 1;
    std::string output_root = "out";
    double p_threshold = 0.05;
    bool paired_test = false;
};

// Parses the JSON config; relative paths are resolved against the config
// file's directory. Unknown keys are rejected to catch typos.
BenchConfig load_config(const std::string& path);

// Field sanity independent of the filesystem (ranges, known names).
void validate_config(const BenchConfig& config);

// Anchoring follows the clip level: 5% clip anchors the 95th percentile,
// 10% the 90th.
double anchor_percentile_for(const CameraSpec& camera);

}  // namespace hdrbench
