#include "hdrbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "hdrbench/baselines.hpp"
#include "hdrbench/hdr_io.hpp"
#include "hdrbench/log.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/report.hpp"

namespace hdrbench {

namespace fs = std::filesystem;

bool glob_match(const std::string& pattern, const std::string& name) {
    size_t p = 0, n = 0;
    size_t star = std::string::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<SceneRef> discover_scenes(const BenchConfig& config) {
    if (!fs::is_directory(config.dataset_dir))
        throw std::runtime_error("dataset_dir is not a directory: " + config.dataset_dir);

    std::vector<SceneRef> scenes;
    if (!config.scene_list.empty()) {
        for (const std::string& name : config.scene_list) {
            fs::path base = fs::path(config.dataset_dir) / name;
            SceneRef ref;
            ref.id = fs::path(name).stem().string();
            if (fs::is_regular_file(base))
                ref.path = base.string();
            else if (fs::is_regular_file(base.string() + ".hdr"))
                ref.path = base.string() + ".hdr";
            else if (fs::is_regular_file(base.string() + ".pfm"))
                ref.path = base.string() + ".pfm";
            else
                throw std::runtime_error("scene not found in dataset: " + name);
            scenes.push_back(ref);
        }
    } else {
        for (const auto& entry : fs::directory_iterator(config.dataset_dir)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            if (ext != ".hdr" && ext != ".pfm") continue;
            if (!glob_match(config.scene_glob, entry.path().filename().string())) continue;
            scenes.push_back({entry.path().stem().string(), entry.path().string()});
        }
    }

    std::sort(scenes.begin(), scenes.end(),
              [](const SceneRef& a, const SceneRef& b) { return a.id < b.id; });
    for (size_t i = 1; i < scenes.size(); ++i)
        if (scenes[i].id == scenes[i - 1].id)
            throw std::runtime_error("ambiguous scene id in dataset: " + scenes[i].id);
    if (scenes.empty()) throw std::runtime_error("no scenes found in " + config.dataset_dir);
    return scenes;
}

HdrImage load_scene(const SceneRef& scene, int target_width, int target_height) {
    HdrImage img = load_hdr(scene.path);
    img = resize_center_crop(img, target_width, target_height);
    img.validate();
    return img;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    int w = workers;
    if (w <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        w = hw ? static_cast<int>(hw) : 1;
    }
    w = static_cast<int>(std::min<std::size_t>(w, count));
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (std::thread& th : pool) th.join();
}

namespace {

CrfMode crf_mode_of(const CameraSpec& cam) {
    if (cam.crf == "mcrf") return CrfMode::Static;
    if (cam.crf == "clahe") return CrfMode::Clahe;
    return CrfMode::Identity;
}

// Counts and logs failures from parallel scene work.
struct FailureLog {
    std::mutex mu;
    int count = 0;

    void add(const std::string& what) {
        std::lock_guard<std::mutex> g(mu);
        ++count;
        log_error(what);
    }
};

fs::path sim_dir(const BenchConfig& c, const std::string& camera) {
    return fs::path(c.output_root) / "sim" / camera;
}
fs::path recon_dir(const BenchConfig& c, const std::string& camera, const std::string& method) {
    return fs::path(c.output_root) / "recon" / camera / method;
}
fs::path results_dir(const BenchConfig& c, const std::string& camera) {
    return fs::path(c.output_root) / "results" / camera;
}

// Synthesized methods live in the harness tree; external ones may nest per
// camera or use the flat single-camera layout.
std::string find_reconstruction(const BenchConfig& config, const std::string& camera,
                                const std::string& method, const std::string& scene_id) {
    std::vector<fs::path> candidates;
    auto ext_it = config.external_methods.find(method);
    if (ext_it == config.external_methods.end()) {
        candidates.push_back(recon_dir(config, camera, method) / (scene_id + ".pfm"));
        candidates.push_back(recon_dir(config, camera, method) / (scene_id + ".hdr"));
    } else {
        fs::path base(ext_it->second);
        candidates.push_back(base / camera / (scene_id + ".pfm"));
        candidates.push_back(base / camera / (scene_id + ".hdr"));
        candidates.push_back(base / (scene_id + ".pfm"));
        candidates.push_back(base / (scene_id + ".hdr"));
    }
    for (const fs::path& p : candidates)
        if (fs::is_regular_file(p)) return p.string();
    throw std::runtime_error("reconstruction missing: method " + method + ", scene " + scene_id +
                             ", camera " + camera);
}

std::vector<std::string> all_method_names(const BenchConfig& config) {
    std::vector<std::string> methods = config.synthesize_methods;
    for (const auto& [name, dir] : config.external_methods) methods.push_back(name);
    std::sort(methods.begin(), methods.end());
    return methods;
}

}  // namespace

int cmd_simulate(const BenchConfig& config, int workers) {
    std::vector<SceneRef> scenes = discover_scenes(config);

    bool needs_dorf = false;
    for (const auto& [name, cam] : config.cameras)
        if (cam.crf == "mcrf") needs_dorf = true;
    Crf static_curve;
    if (needs_dorf) {
        CrfDatabase db = load_dorf(config.dorf_file);
        static_curve = mean_crf(db);
        log_info("selected static curve '" + static_curve.name + "' from " +
                 std::to_string(db.curves.size()) + " database curves");
    }

    FailureLog failures;
    for (const auto& [name, cam] : config.cameras) {
        CameraConfig cc;
        cc.crf_mode = crf_mode_of(cam);
        cc.static_crf = static_curve;
        cc.clahe = config.clahe;
        cc.clip_fraction = cam.clip_fraction;
        cc.noise = config.noise;
        cc.bit_depth = config.bit_depth;
        cc.seed = config.seed;

        fs::path out = sim_dir(config, name);
        fs::create_directories(out);
        if (cc.crf_mode == CrfMode::Static)
            write_crf_csv(static_curve, (out / "crf.csv").string());

        const std::string camera = name;
        parallel_for(scenes.size(), workers, [&](std::size_t i) {
            const SceneRef& scene = scenes[i];
            try {
                HdrImage h = load_scene(scene, config.target_width, config.target_height);
                auto [ldr, meta] = simulate(h, cc, scene.id);
                write_ldr_pfm(ldr, (out / (scene.id + ".pfm")).string());
                write_meta(meta, (out / (scene.id + ".json")).string());
            } catch (const std::exception& ex) {
                failures.add("simulate " + camera + "/" + scene.id + ": " + ex.what());
            }
        });
        log_info("simulated " + std::to_string(scenes.size()) + " scenes for camera " + camera);
    }
    return failures.count;
}

int cmd_baselines(const BenchConfig& config, int workers) {
    std::vector<SceneRef> scenes = discover_scenes(config);
    FailureLog failures;

    for (const auto& [camera, cam] : config.cameras) {
        fs::path sims = sim_dir(config, camera);
        for (const std::string& method : config.synthesize_methods)
            fs::create_directories(recon_dir(config, camera, method));

        parallel_for(scenes.size(), workers, [&](std::size_t i) {
            const SceneRef& scene = scenes[i];
            try {
                SimulationMeta meta = load_meta((sims / (scene.id + ".json")).string());
                LdrImage ldr =
                    load_ldr_pfm((sims / (scene.id + ".pfm")).string(), meta.bit_depth);
                HdrImage h = load_scene(scene, config.target_width, config.target_height);
                for (const std::string& method : config.synthesize_methods) {
                    Reconstruction r;
                    if (method == "p-lin")
                        r = baseline_plin(h, meta.exposure_e, meta.noise, meta.bit_depth,
                                          meta.seed);
                    else if (method == "p-rec")
                        r = baseline_prec(h, ldr, meta.exposure_e);
                    else
                        r = baseline_naive(ldr);
                    write_pfm(r.image,
                              (recon_dir(config, camera, method) / (scene.id + ".pfm")).string());
                }
            } catch (const std::exception& ex) {
                failures.add("baselines " + camera + "/" + scene.id + ": " + ex.what());
            }
        });
        log_info("baselines written for camera " + camera);
    }
    return failures.count;
}

int cmd_evaluate(const BenchConfig& config, int workers) {
    std::vector<SceneRef> scenes = discover_scenes(config);
    std::vector<std::string> methods = all_method_names(config);
    int total_failures = 0;

    for (const auto& [camera, cam] : config.cameras) {
        DisplayModel display = config.display;
        display.anchor_percentile = anchor_percentile_for(cam);
        const double peak = pu_peak(config.pu, display);

        ScoreTable table;
        std::mutex table_mu;
        std::set<std::string> failed_scenes;
        FailureLog failures;
        fs::path sims = sim_dir(config, camera);

        parallel_for(scenes.size(), workers, [&](std::size_t i) {
            const SceneRef& scene = scenes[i];
            try {
                HdrImage ref = load_scene(scene, config.target_width, config.target_height);
                double ref_scale = anchor_scale(ref, display);
                HdrImage ref_anchored = anchor_with_scale(ref, ref_scale);

                SimulationMeta meta = load_meta((sims / (scene.id + ".json")).string());
                LdrImage ldr =
                    load_ldr_pfm((sims / (scene.id + ".pfm")).string(), meta.bit_depth);
                AlphaMap mask = saturation_mask(ldr);
                bool mask_empty = true;
                for (double a : mask.values)
                    if (a > 0.0) { mask_empty = false; break; }
                if (mask_empty)
                    log_warn("evaluate " + camera + "/" + scene.id +
                             ": no saturated pixels, masked scores skipped");

                for (const std::string& method : methods) {
                    HdrImage test =
                        load_hdr(find_reconstruction(config, camera, method, scene.id));
                    if (test.width != ref.width || test.height != ref.height)
                        throw std::runtime_error("dimension mismatch for method " + method);
                    HdrImage test_anchored = config.shared_anchoring
                                                 ? anchor_with_scale(test, ref_scale)
                                                 : anchor_to_display(test, display);
                    for (const std::string& metric_label : config.metric_names) {
                        Metric metric = metric_from_name(metric_label);
                        double value =
                            compute_metric(metric, ref_anchored, test_anchored, config.pu, peak);
                        std::lock_guard<std::mutex> g(table_mu);
                        table.set(metric_label, scene.id, method, value);
                    }
                    if (!mask_empty) {
                        for (const std::string& metric_label : config.metric_names) {
                            Metric metric = metric_from_name(metric_label);
                            double value = masked_score(metric, ref_anchored, test_anchored,
                                                        mask, config.pu, peak);
                            std::lock_guard<std::mutex> g(table_mu);
                            table.set(metric_label + "_sat", scene.id, method, value);
                        }
                    }
                }
            } catch (const std::exception& ex) {
                failures.add("evaluate " + camera + "/" + scene.id + ": " + ex.what());
                std::lock_guard<std::mutex> g(table_mu);
                failed_scenes.insert(scene.id);
            }
        });

        // A scene that failed anywhere is excluded everywhere so every method
        // is compared on the same scene set.
        for (auto& [metric, rows] : table.cells)
            for (const std::string& id : failed_scenes) rows.erase(id);

        fs::path out = results_dir(config, camera);
        fs::create_directories(out);
        for (const std::string& metric_label : config.metric_names) {
            write_score_csv(table, metric_label, (out / ("scores_" + metric_label + ".csv")).string());
            write_score_csv(table, metric_label + "_sat",
                            (out / ("scores_" + metric_label + "_sat.csv")).string());
        }
        log_info("scores written for camera " + camera);
        total_failures += failures.count;
    }
    return total_failures;
}

int cmd_rank(const BenchConfig& config) {
    int failures = 0;
    std::map<std::string, ScoreTable> camera_tables;

    for (const auto& [camera, cam] : config.cameras) {
        fs::path dir = results_dir(config, camera);
        if (!fs::is_directory(dir)) {
            log_error("rank: no results directory for camera " + camera);
            ++failures;
            continue;
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::string name = entry.path().filename().string();
            if (entry.is_regular_file() && name.rfind("scores_", 0) == 0 &&
                entry.path().extension() == ".csv")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());

        ScoreTable table;
        for (const fs::path& f : files) {
            std::string metric = f.stem().string().substr(7);
            ScoreTable part = read_score_csv(f.string(), metric);
            for (const auto& [m, srows] : part.cells)
                for (const auto& [scene, row] : srows)
                    for (const auto& [method, value] : row) table.set(m, scene, method, value);
        }

        std::vector<RankingResult> rankings;
        for (const std::string& metric : table.metrics()) {
            bool enough = table.methods(metric).size() >= 2;
            for (const std::string& m : table.methods(metric))
                if (method_samples(table, metric, m).size() < 2) enough = false;
            if (!enough) {
                log_warn("rank: skipping metric " + metric + " for camera " + camera +
                         " (needs 2 methods with 2 scores each)");
                continue;
            }
            try {
                rankings.push_back(
                    ranking_groups(table, metric, config.p_threshold, config.paired_test));
            } catch (const std::exception& ex) {
                log_error("rank " + camera + "/" + metric + ": " + ex.what());
                ++failures;
            }
        }
        emit_reports(table, rankings, dir.string());
        camera_tables[camera] = std::move(table);
        log_info("reports written for camera " + camera);
    }

    // Clip-level consistency: for each curve type, compare each camera with
    // the next more aggressive clip level.
    nlohmann::json ev = nlohmann::json::object();
    std::map<std::string, std::vector<std::pair<double, std::string>>> by_crf;
    for (const auto& [camera, cam] : config.cameras)
        if (camera_tables.count(camera)) by_crf[cam.crf].emplace_back(cam.clip_fraction, camera);
    for (auto& [crf, cams] : by_crf) {
        std::sort(cams.begin(), cams.end());
        for (size_t i = 0; i + 1 < cams.size(); ++i) {
            const std::string& low = cams[i].second;
            const std::string& high = cams[i + 1].second;
            nlohmann::json entry;
            entry["low_clip_camera"] = low;
            entry["high_clip_camera"] = high;
            for (const std::string& metric : config.metric_names) {
                try {
                    std::vector<EvDelta> deltas =
                        ev_consistency(camera_tables[low], camera_tables[high], metric);
                    nlohmann::json rows = nlohmann::json::array();
                    for (const EvDelta& d : deltas)
                        rows.push_back({{"method", d.method},
                                        {"mean_low_clip", d.mean_low_clip},
                                        {"mean_high_clip", d.mean_high_clip},
                                        {"delta", d.delta},
                                        {"violates_expectation", d.violates_expectation}});
                    entry[metric] = rows;
                } catch (const std::exception& ex) {
                    log_warn("ev consistency " + crf + "/" + metric + ": " + ex.what());
                }
            }
            ev[crf + ":" + low + "->" + high] = entry;
        }
    }
    if (!ev.empty()) {
        fs::path path = fs::path(config.output_root) / "results" / "ev_consistency.json";
        fs::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << ev.dump(2) << "\n";
    }
    return failures;
}

int cmd_export_vdp(const BenchConfig& config, int workers) {
    std::vector<SceneRef> scenes = discover_scenes(config);
    std::vector<std::string> methods = all_method_names(config);
    FailureLog failures;

    for (const auto& [camera, cam] : config.cameras) {
        DisplayModel display = config.display;
        display.anchor_percentile = anchor_percentile_for(cam);
        fs::path out = fs::path(config.output_root) / "vdp" / camera;
        fs::create_directories(out);

        parallel_for(scenes.size(), workers, [&](std::size_t i) {
            const SceneRef& scene = scenes[i];
            try {
                HdrImage ref = load_scene(scene, config.target_width, config.target_height);
                double ref_scale = anchor_scale(ref, display);
                HdrImage ref_anchored = anchor_with_scale(ref, ref_scale);
                for (const std::string& method : methods) {
                    HdrImage test =
                        load_hdr(find_reconstruction(config, camera, method, scene.id));
                    HdrImage test_anchored = config.shared_anchoring
                                                 ? anchor_with_scale(test, ref_scale)
                                                 : anchor_to_display(test, display);
                    export_vdp_pair(ref_anchored, test_anchored, display, scene.id, method,
                                    (out / (scene.id + "__" + method)).string());
                }
            } catch (const std::exception& ex) {
                failures.add("export-vdp " + camera + "/" + scene.id + ": " + ex.what());
            }
        });

        // Close the loop when the external predictor already ran.
        fs::path ingest = out / "q_jod.csv";
        if (fs::is_regular_file(ingest)) {
            try {
                ScoreTable t;
                int rows = ingest_vdp_scores(ingest.string(), t, "q_jod");
                fs::path rdir = results_dir(config, camera);
                fs::create_directories(rdir);
                write_score_csv(t, "q_jod", (rdir / "scores_q_jod.csv").string());
                log_info("ingested " + std::to_string(rows) + " external scores for camera " +
                         camera);
            } catch (const std::exception& ex) {
                failures.add("ingest q_jod for " + camera + ": " + ex.what());
            }
        }
        log_info("vdp export complete for camera " + camera);
    }
    return failures.count;
}

}  // namespace hdrbench
