#include "hdrbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "hdrbench/camsim.hpp"
#include "hdrbench/hdr_io.hpp"

namespace hdrbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Local uniform stream so scene content never depends on the standard
// library's distribution internals.
struct UniformStream {
    std::uint64_t state;

    explicit UniformStream(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        // splitmix64 step.
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace

HdrImage synth_scene(std::uint64_t seed, int width, int height) {
    if (width < 16 || height < 16) throw std::runtime_error("synth_scene: size too small");
    UniformStream rng(seed);

    // Smooth base field from a few low-frequency waves.
    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> waves;
    int nw = rng.uniform_int(3, 4);
    for (int i = 0; i < nw; ++i)
        waves.push_back({rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0),
                         rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.6, 1.0)});

    // Mid-frequency texture so windows see structure.
    double tfx = rng.uniform(8.0, 14.0);
    double tfy = rng.uniform(8.0, 14.0);
    double tphase = rng.uniform(0.0, 2.0 * kPi);
    const double tamp = 0.3;

    // Fine texture riding on the bright plateaus.  Clipping a plateau then
    // erases real structure instead of just shaving a smooth peak.
    double hfx = rng.uniform(18.0, 28.0);
    double hfy = rng.uniform(18.0, 28.0);
    double hp1 = rng.uniform(0.0, 2.0 * kPi);
    double hp2 = rng.uniform(0.0, 2.0 * kPi);
    const double hamp = 0.5;

    // Flat-topped bright regions.  They hold enough pixel mass that both
    // capture clip points land inside them, so a deeper clip always trades
    // textured area away rather than buying exposure headroom.
    struct Blob {
        double cx, cy, sigma;
    };
    std::vector<Blob> plateaus;
    for (int i = 0; i < 4; ++i)
        plateaus.push_back(
            {rng.uniform(0.18, 0.82), rng.uniform(0.18, 0.82), rng.uniform(0.085, 0.115)});
    const double plateau_height = 2.2;
    double ptint[3] = {rng.uniform(0.9, 1.1), rng.uniform(0.9, 1.1), rng.uniform(0.9, 1.1)};

    // Small very bright cores give the histogram a heavy tail above every
    // clip point, the main source of irrecoverable highlight error.
    struct Core {
        double cx, cy, sigma, peak, color[3];
    };
    std::vector<Core> cores;
    for (int i = 0; i < 3; ++i) {
        const Blob& b = plateaus[i];
        cores.push_back({b.cx, b.cy, b.sigma / 3.0, rng.uniform(6.0, 10.0),
                         {rng.uniform(0.75, 1.0), rng.uniform(0.75, 1.0), rng.uniform(0.75, 1.0)}});
    }

    // Mild global tint keeps channel ratios below 2.
    double tint[3] = {rng.uniform(0.85, 1.15), rng.uniform(0.85, 1.15), rng.uniform(0.85, 1.15)};

    // Raw field, then its range, then a log mapping onto the dark range.
    std::vector<double> field(static_cast<size_t>(width) * height);
    double fmin = 1e300, fmax = -1e300;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double u = static_cast<double>(x) / width;
            double v = static_cast<double>(y) / height;
            double f = 0.0;
            for (const Wave& wv : waves)
                f += wv.amp * std::sin(2.0 * kPi * (wv.fx * u + wv.fy * v) + wv.phase);
            field[static_cast<size_t>(y) * width + x] = f;
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
        }
    double span = fmax - fmin;
    if (span <= 0.0) span = 1.0;

    const double ln_lo = std::log(0.04);
    const double ln_hi = std::log(0.4);
    HdrImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double u = static_cast<double>(x) / width;
            double v = static_cast<double>(y) / height;
            double t = (field[static_cast<size_t>(y) * width + x] - fmin) / span;
            double base = std::exp(ln_lo + (ln_hi - ln_lo) * t);
            base *= 1.0 + tamp * std::sin(2.0 * kPi * tfx * u + tphase) *
                              std::sin(2.0 * kPi * tfy * v);

            double plat = 0.0;
            for (const Blob& b : plateaus) {
                double dx = u - b.cx;
                double dy = v - b.cy;
                double r2 = (dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma);
                plat = std::max(plat, plateau_height * std::exp(-r2 * r2));
            }
            double highlight_texture = 1.0 + hamp * std::sin(2.0 * kPi * hfx * u + hp1) *
                                                 std::cos(2.0 * kPi * hfy * v + hp2);
            plat *= highlight_texture;

            double core[3] = {0.0, 0.0, 0.0};
            for (const Core& c : cores) {
                double dx = u - c.cx;
                double dy = v - c.cy;
                double r2 = (dx * dx + dy * dy) / (2.0 * c.sigma * c.sigma);
                double g = c.peak * std::exp(-r2 * r2);
                for (int ch = 0; ch < 3; ++ch) core[ch] += g * c.color[ch];
            }

            double* px = img.px(x, y);
            for (int c = 0; c < 3; ++c)
                px[c] = base * tint[c] + plat * ptint[c] + core[c];
        }
    img.validate();
    return img;
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void write_curve(std::ofstream& f, const std::string& name,
                 const std::vector<double>& brightness) {
    f << name << "\n";
    f << "I = ";
    char buf[32];
    int n = static_cast<int>(brightness.size());
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.8f", static_cast<double>(i) / (n - 1));
        f << buf << (i + 1 < n ? " " : "\n");
    }
    f << "B = ";
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.8f", brightness[i]);
        f << buf << (i + 1 < n ? " " : "\n");
    }
}

}  // namespace

void write_synthetic_dorf(const std::string& path, int curve_count) {
    if (curve_count < 2) throw std::runtime_error("dorf synth: need at least 2 curves");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);

    const int samples = 1024;
    // Rough 60/40 split between gamma and sigmoid families.
    int n_gamma = (curve_count * 3 + 2) / 5;
    int n_sig = curve_count - n_gamma;
    int sig_side = std::max(1, static_cast<int>(std::lround(std::sqrt(double(n_sig)))));

    std::vector<double> b(samples);
    char name[64];
    for (int i = 0; i < n_gamma; ++i) {
        double gamma = 0.35 + 0.75 * (n_gamma > 1 ? static_cast<double>(i) / (n_gamma - 1) : 0.5);
        for (int k = 0; k < samples; ++k)
            b[k] = std::pow(static_cast<double>(k) / (samples - 1), gamma);
        std::snprintf(name, sizeof name, "gamma_%03d_g%.4f", i, gamma);
        write_curve(f, name, b);
    }
    int emitted = 0;
    for (int j = 0; j < sig_side && emitted < n_sig; ++j)
        for (int k = 0; k < sig_side + 2 && emitted < n_sig; ++k) {
            double a = 3.0 + 4.0 * (sig_side > 1 ? static_cast<double>(j) / (sig_side - 1) : 0.5);
            double c = 0.35 + 0.3 * static_cast<double>(k) / (sig_side + 1);
            double lo = logistic(-c * a);
            double hi = logistic((1.0 - c) * a);
            for (int s = 0; s < samples; ++s) {
                double v = static_cast<double>(s) / (samples - 1);
                b[s] = (logistic((v - c) * a) - lo) / (hi - lo);
            }
            std::snprintf(name, sizeof name, "sigmoid_%03d_a%.3f_c%.3f", emitted, a, c);
            write_curve(f, name, b);
            ++emitted;
        }
    if (!f) throw std::runtime_error("write failed: " + path);
}

void write_demo_dataset(const std::string& dir, int scene_count, int width, int height,
                        std::uint64_t seed) {
    if (scene_count < 1) throw std::runtime_error("demo dataset: need at least one scene");
    std::filesystem::path root(dir);
    std::filesystem::create_directories(root / "scenes");

    for (int i = 0; i < scene_count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "scene_%02d", i + 1);
        HdrImage img = synth_scene(mix_seed(seed, name), width, height);
        write_hdr(img, (root / "scenes" / (std::string(name) + ".hdr")).string());
    }
    write_synthetic_dorf((root / "dorf_synthetic.txt").string());

    nlohmann::json cfg;
    cfg["dataset_dir"] = "scenes";
    cfg["scenes"] = "*.hdr";
    cfg["target_size"] = {width, height};
    cfg["dorf_file"] = "dorf_synthetic.txt";
    cfg["cameras"] = {{"mcrf_ev5", {{"crf", "mcrf"}, {"clip_fraction", 0.05}}},
                      {"mcrf_ev10", {{"crf", "mcrf"}, {"clip_fraction", 0.10}}},
                      {"clahe_ev5", {{"crf", "clahe"}, {"clip_fraction", 0.05}}},
                      {"clahe_ev10", {{"crf", "clahe"}, {"clip_fraction", 0.10}}}};
    cfg["noise"] = {{"k_signal", 8e-4}, {"sigma_read", 5e-4}, {"enabled", true}};
    cfg["bit_depth"] = 8;
    cfg["display"] = {{"target_nits", 500.0},
                      {"diagonal_inches", 24.0},
                      {"resolution", {1920, 1200}},
                      {"viewing_distance_m", 0.5}};
    cfg["anchoring"] = "independent";
    cfg["metrics"] = {"pu-psnr", "pu-ssim", "linear-psnr"};
    cfg["synthesize_methods"] = {"p-lin", "p-rec", "naive"};
    cfg["seed"] = seed;
    cfg["output_root"] = "out";

    std::ofstream f(root / "config.json");
    if (!f) throw std::runtime_error("cannot write demo config");
    f << cfg.dump(2) << "\n";
}

}  // namespace hdrbench
