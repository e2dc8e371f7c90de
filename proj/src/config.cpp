#include "hdrbench/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace hdrbench {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, v] : j.items())
        if (!known.count(key))
            throw std::runtime_error("config: unknown key '" + key + "' in " + where);
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (base / fp).lexically_normal().string();
}

}  // namespace

double anchor_percentile_for(const CameraSpec& camera) {
    return 100.0 * (1.0 - camera.clip_fraction);
}

BenchConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    reject_unknown_keys(
        j,
        {"dataset_dir", "scenes", "scene_glob", "target_size", "dorf_file", "cameras", "noise",
         "bit_depth", "clahe", "display", "anchoring", "pu21_coefficients", "metrics",
         "synthesize_methods", "external_methods", "seed", "output_root", "p_threshold",
         "paired_test"},
        "top level");

    BenchConfig c;
    c.dataset_dir = resolve(base, j.at("dataset_dir").get<std::string>());
    if (j.contains("scenes")) {
        if (j["scenes"].is_string())
            c.scene_glob = j["scenes"].get<std::string>();
        else
            c.scene_list = j["scenes"].get<std::vector<std::string>>();
    }
    if (j.contains("scene_glob")) c.scene_glob = j["scene_glob"].get<std::string>();
    if (j.contains("target_size")) {
        auto ts = j["target_size"];
        if (!ts.is_array() || ts.size() != 2)
            throw std::runtime_error("config: target_size must be [width, height]");
        c.target_width = ts[0].get<int>();
        c.target_height = ts[1].get<int>();
    }
    if (j.contains("dorf_file")) c.dorf_file = resolve(base, j["dorf_file"].get<std::string>());

    if (!j.contains("cameras") || !j["cameras"].is_object() || j["cameras"].empty())
        throw std::runtime_error("config: 'cameras' must be a non-empty object");
    for (const auto& [name, jc] : j["cameras"].items()) {
        reject_unknown_keys(jc, {"crf", "clip_fraction"}, "camera '" + name + "'");
        CameraSpec spec;
        spec.crf = jc.at("crf").get<std::string>();
        spec.clip_fraction = jc.at("clip_fraction").get<double>();
        c.cameras[name] = spec;
    }

    if (j.contains("noise")) {
        reject_unknown_keys(j["noise"], {"k_signal", "sigma_read", "enabled"}, "noise");
        if (j["noise"].contains("k_signal")) c.noise.k_signal = j["noise"]["k_signal"];
        if (j["noise"].contains("sigma_read")) c.noise.sigma_read = j["noise"]["sigma_read"];
        if (j["noise"].contains("enabled")) c.noise.enabled = j["noise"]["enabled"];
    }
    if (j.contains("bit_depth")) c.bit_depth = j["bit_depth"].get<int>();
    if (j.contains("clahe")) {
        reject_unknown_keys(j["clahe"], {"clip_limit", "bins", "log_floor"}, "clahe");
        if (j["clahe"].contains("clip_limit")) c.clahe.clip_limit = j["clahe"]["clip_limit"];
        if (j["clahe"].contains("bins")) c.clahe.bins = j["clahe"]["bins"];
        if (j["clahe"].contains("log_floor")) c.clahe.log_floor = j["clahe"]["log_floor"];
    }

    if (j.contains("display")) {
        reject_unknown_keys(j["display"],
                            {"target_nits", "diagonal_inches", "resolution",
                             "viewing_distance_m"},
                            "display");
        auto& jd = j["display"];
        if (jd.contains("target_nits")) c.display.target_nits = jd["target_nits"];
        if (jd.contains("diagonal_inches")) c.display.diagonal_inches = jd["diagonal_inches"];
        if (jd.contains("resolution")) {
            auto r = jd["resolution"];
            if (!r.is_array() || r.size() != 2)
                throw std::runtime_error("config: display.resolution must be [w, h]");
            c.display.resolution_w = r[0].get<int>();
            c.display.resolution_h = r[1].get<int>();
        }
        if (jd.contains("viewing_distance_m"))
            c.display.viewing_distance_m = jd["viewing_distance_m"];
    }
    if (j.contains("anchoring")) {
        std::string mode = j["anchoring"].get<std::string>();
        if (mode == "independent")
            c.shared_anchoring = false;
        else if (mode == "shared")
            c.shared_anchoring = true;
        else
            throw std::runtime_error("config: anchoring must be 'independent' or 'shared'");
    }
    if (j.contains("pu21_coefficients")) {
        auto p = j["pu21_coefficients"].get<std::vector<double>>();
        if (p.size() != 7) throw std::runtime_error("config: pu21_coefficients needs 7 values");
        std::copy(p.begin(), p.end(), c.pu.coefficients.begin());
    }
    if (j.contains("metrics")) c.metric_names = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("synthesize_methods"))
        c.synthesize_methods = j["synthesize_methods"].get<std::vector<std::string>>();
    if (j.contains("external_methods"))
        for (const auto& [name, dir] : j["external_methods"].items())
            c.external_methods[name] = resolve(base, dir.get<std::string>());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_root")) c.output_root = resolve(base, j["output_root"].get<std::string>());
    if (j.contains("p_threshold")) c.p_threshold = j["p_threshold"].get<double>();
    if (j.contains("paired_test")) c.paired_test = j["paired_test"].get<bool>();

    validate_config(c);
    return c;
}

void validate_config(const BenchConfig& config) {
    if (config.dataset_dir.empty()) throw std::runtime_error("config: dataset_dir is required");
    if (config.target_width < 16 || config.target_height < 16)
        throw std::runtime_error("config: target size too small");
    if (config.cameras.empty()) throw std::runtime_error("config: no cameras defined");
    bool needs_dorf = false;
    for (const auto& [name, cam] : config.cameras) {
        if (cam.crf != "mcrf" && cam.crf != "clahe" && cam.crf != "identity")
            throw std::runtime_error("config: camera '" + name +
                                     "' crf must be mcrf, clahe or identity");
        if (cam.crf == "mcrf") needs_dorf = true;
        if (!(cam.clip_fraction > 0.0 && cam.clip_fraction < 1.0))
            throw std::runtime_error("config: camera '" + name +
                                     "' clip_fraction must be in (0,1)");
    }
    if (needs_dorf && config.dorf_file.empty())
        throw std::runtime_error("config: dorf_file is required when any camera uses mcrf");
    if (config.bit_depth < 2 || config.bit_depth > 16)
        throw std::runtime_error("config: bit_depth must be in [2,16]");
    if (config.display.target_nits <= 0.0 || config.display.viewing_distance_m <= 0.0 ||
        config.display.diagonal_inches <= 0.0 || config.display.resolution_w <= 0 ||
        config.display.resolution_h <= 0)
        throw std::runtime_error("config: display fields must be positive");
    for (const std::string& m : config.metric_names) metric_from_name(m);
    std::set<std::string> methods;
    for (const std::string& m : config.synthesize_methods) {
        if (m != "p-lin" && m != "p-rec" && m != "naive")
            throw std::runtime_error("config: unknown synthesized method " + m);
        methods.insert(m);
    }
    for (const auto& [name, dir] : config.external_methods)
        if (methods.count(name))
            throw std::runtime_error("config: method name collision: " + name);
    if (!(config.p_threshold > 0.0 && config.p_threshold < 1.0))
        throw std::runtime_error("config: p_threshold must be in (0,1)");
    if (config.metric_names.empty()) throw std::runtime_error("config: metrics list is empty");
}

}  // namespace hdrbench
