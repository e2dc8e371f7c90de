#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hdrbench/config.hpp"
#include "hdrbench/stats.hpp"

namespace hdrbench {

struct SceneRef {
    std::string id;    // file stem
    std::string path;  // full path to the .hdr or .pfm
};

// Dataset scenes sorted by id; honors the explicit list or the glob.
// Errors when the dataset resolves to nothing.
std::vector<SceneRef> discover_scenes(const BenchConfig& config);

// Load plus center-crop resize to the configured raster.
HdrImage load_scene(const SceneRef& scene, int target_width, int target_height);

// `*` and `?` wildcards, no character classes.
bool glob_match(const std::string& pattern, const std::string& name);

// Runs fn over [0, count) on a small thread pool; workers <= 0 picks the
// hardware count. Exceptions must be handled inside fn.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// Pipeline stages. Each returns the number of failed units after logging
// them; a run continues past per-scene failures.
int cmd_simulate(const BenchConfig& config, int workers);
int cmd_baselines(const BenchConfig& config, int workers);
int cmd_evaluate(const BenchConfig& config, int workers);
int cmd_rank(const BenchConfig& config);
int cmd_export_vdp(const BenchConfig& config, int workers);

}  // namespace hdrbench
