#include <cstdint>
#include <exception>
#include <functional>
#include <string>

#include "CLI11.hpp"

#include "hdrbench/config.hpp"
#include "hdrbench/log.hpp"
#include "hdrbench/pipeline.hpp"
#include "hdrbench/synth.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    bool has_out = false;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON benchmark config")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed_override, "override the global seed")
        ->each([&](const std::string&) { opts.has_seed = true; });
    cmd->add_option("--workers", opts.workers, "worker threads, 0 = hardware count");
    cmd->add_option("--out", opts.out_override, "override the output root")
        ->each([&](const std::string&) { opts.has_out = true; });
}

int run_stage(const CommonOpts& opts,
              const std::function<int(const hdrbench::BenchConfig&)>& stage) {
    hdrbench::BenchConfig config = hdrbench::load_config(opts.config_path);
    if (opts.has_seed) config.seed = opts.seed_override;
    if (opts.has_out) config.output_root = opts.out_override;
    int failures = stage(config);
    if (failures > 0) {
        hdrbench::log_error(std::to_string(failures) + " unit(s) failed");
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark harness for single-image HDR reconstruction"};
    app.require_subcommand(1);

    CommonOpts sim_o, base_o, eval_o, rank_o, vdp_o;
    CLI::App* sim = app.add_subcommand("simulate", "render LDR captures for every camera");
    add_common(sim, sim_o);
    CLI::App* base = app.add_subcommand("baselines", "synthesize the analytic reconstructions");
    add_common(base, base_o);
    CLI::App* eval = app.add_subcommand("evaluate", "score reconstructions against references");
    add_common(eval, eval_o);
    CLI::App* rank = app.add_subcommand("rank", "aggregate, test and render reports");
    add_common(rank, rank_o);
    CLI::App* vdp = app.add_subcommand("export-vdp", "export calibrated pairs for HDR-VDP-3");
    add_common(vdp, vdp_o);

    std::string synth_dir;
    int synth_scenes = 12;
    int synth_w = 192;
    int synth_h = 128;
    std::uint64_t synth_seed = 7;
    CLI::App* synth = app.add_subcommand("synth", "generate a demo dataset plus config");
    synth->add_option("--out", synth_dir, "dataset directory to create")->required();
    synth->add_option("--scenes", synth_scenes, "number of scenes")->check(CLI::PositiveNumber);
    synth->add_option("--width", synth_w, "scene width")->check(CLI::PositiveNumber);
    synth->add_option("--height", synth_h, "scene height")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_stage(sim_o, [&](const hdrbench::BenchConfig& c) {
                return hdrbench::cmd_simulate(c, sim_o.workers);
            });
        if (base->parsed())
            return run_stage(base_o, [&](const hdrbench::BenchConfig& c) {
                return hdrbench::cmd_baselines(c, base_o.workers);
            });
        if (eval->parsed())
            return run_stage(eval_o, [&](const hdrbench::BenchConfig& c) {
                return hdrbench::cmd_evaluate(c, eval_o.workers);
            });
        if (rank->parsed())
            return run_stage(rank_o,
                             [&](const hdrbench::BenchConfig& c) { return hdrbench::cmd_rank(c); });
        if (vdp->parsed())
            return run_stage(vdp_o, [&](const hdrbench::BenchConfig& c) {
                return hdrbench::cmd_export_vdp(c, vdp_o.workers);
            });
        if (synth->parsed()) {
            hdrbench::write_demo_dataset(synth_dir, synth_scenes, synth_w, synth_h, synth_seed);
            hdrbench::log_info("demo dataset written to " + synth_dir);
            return 0;
        }
    } catch (const std::exception& ex) {
        hdrbench::log_error(ex.what());
        return 2;
    }
    return 0;
}
