#include "hdrbench/crf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hdrbench {

namespace {

// Piecewise-linear resample of (xs, ys) onto a uniform grid over [0,1].
std::vector<double> resample_uniform(const std::vector<double>& xs,
                                     const std::vector<double>& ys, int grid) {
    std::vector<double> out(grid);
    std::size_t j = 0;
    for (int i = 0; i < grid; ++i) {
        const double u = static_cast<double>(i) / (grid - 1);
        while (j + 2 < xs.size() && xs[j + 1] <= u) ++j;
        const double x0 = xs[j], x1 = xs[j + 1];
        const double t = x1 > x0 ? std::clamp((u - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
        out[i] = ys[j] + (ys[j + 1] - ys[j]) * t;
    }
    return out;
}

// Cumulative max, then renormalize so the endpoints pin to 0 and 1.
bool project_monotone(std::vector<double>& g) {
    bool moved = false;
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (g[i] < g[i - 1]) {
            g[i] = g[i - 1];
            moved = true;
        }
    }
    const double lo = g.front(), hi = g.back();
    if (hi - lo <= 0.0)
        throw std::runtime_error("crf: curve has zero total variation");
    for (double& v : g) v = (v - lo) / (hi - lo);
    g.front() = 0.0;
    g.back() = 1.0;
    return moved;
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

bool numeric_line(const std::string& s) {
    std::istringstream in(s);
    double v;
    if (!(in >> v)) return false;
    return true;
}

}  // namespace

Crf identity_crf(int grid) {
    Crf c;
    c.name = "identity";
    c.samples.resize(grid);
    for (int i = 0; i < grid; ++i)
        c.samples[i] = static_cast<double>(i) / (grid - 1);
    return c;
}

CrfDatabase parse_dorf(std::istream& text) {
    CrfDatabase db;
    std::string line;
    std::string pending_name;
    bool have_name = false;

    // State machine over the two markers; everything between records that is
    // not numeric is a candidate curve name (the first such line wins).
    std::vector<double> irradiance, brightness;
    int collecting = 0;  // 0 idle, 1 after "I =", 2 after "B ="

    auto finish_record = [&]() {
        if (collecting != 2) return;
        if (irradiance.size() != brightness.size())
            throw std::runtime_error("dorf: mismatched I/B sample counts for record '" +
                                     pending_name + "'");
        if (irradiance.size() < 2)
            throw std::runtime_error("dorf: record '" + pending_name + "' has too few samples");
        for (double v : irradiance)
            if (v < -1e-6 || v > 1.0 + 1e-6)
                throw std::runtime_error("dorf: irradiance sample outside [0,1]");
        for (double v : brightness)
            if (v < -1e-6 || v > 1.0 + 1e-6)
                throw std::runtime_error("dorf: brightness sample outside [0,1]");
        for (double& v : irradiance) v = std::clamp(v, 0.0, 1.0);
        for (double& v : brightness) v = std::clamp(v, 0.0, 1.0);

        Crf c;
        c.name = pending_name.empty() ? ("curve_" + std::to_string(db.curves.size())) : pending_name;
        c.samples = resample_uniform(irradiance, brightness, kCrfGridSize);
        c.projected = project_monotone(c.samples);
        db.curves.push_back(std::move(c));

        irradiance.clear();
        brightness.clear();
        pending_name.clear();
        have_name = false;
        collecting = 0;
    };

    while (std::getline(text, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto i_pos = line.find("I =");
        const auto b_pos = line.find("B =");
        if (i_pos != std::string::npos && b_pos == std::string::npos) {
            finish_record();
            collecting = 1;
            auto nums = parse_numbers(line.substr(i_pos + 3));
            irradiance.insert(irradiance.end(), nums.begin(), nums.end());
        } else if (b_pos != std::string::npos) {
            collecting = 2;
            auto nums = parse_numbers(line.substr(b_pos + 3));
            brightness.insert(brightness.end(), nums.begin(), nums.end());
        } else if (collecting == 1) {
            auto nums = parse_numbers(line);
            irradiance.insert(irradiance.end(), nums.begin(), nums.end());
        } else if (collecting == 2 && numeric_line(line)) {
            auto nums = parse_numbers(line);
            brightness.insert(brightness.end(), nums.begin(), nums.end());
        } else {
            if (collecting == 2) finish_record();
            std::string trimmed = line;
            trimmed.erase(0, trimmed.find_first_not_of(" \t"));
            trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
            if (!trimmed.empty() && !have_name) {
                pending_name = trimmed;
                have_name = true;
            }
        }
    }
    finish_record();

    if (db.curves.empty())
        throw std::runtime_error("dorf: no records found");
    return db;
}

CrfDatabase load_dorf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return parse_dorf(in);
}

const Crf& mean_crf(const CrfDatabase& db) {
    if (db.curves.empty())
        throw std::runtime_error("mean_crf: empty database");
    const int grid = db.curves.front().grid_size();
    std::vector<double> mean(grid, 0.0);
    for (const Crf& c : db.curves)
        for (int i = 0; i < grid; ++i) mean[i] += c.samples[i];
    for (double& v : mean) v /= db.curves.size();

    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < db.curves.size(); ++k) {
        double d = 0.0;
        for (int i = 0; i < grid; ++i) {
            const double diff = db.curves[k].samples[i] - mean[i];
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return db.curves[best];
}

Crf clahe_crf(const HdrImage& exposed, const ClaheParams& params) {
    if (!(params.clip_limit > 1.0))
        throw std::runtime_error("clahe: clip_limit must exceed 1");
    if (params.bins < 2)
        throw std::runtime_error("clahe: needs at least 2 bins");
    if (!(params.log_floor > 0.0 && params.log_floor < 1.0))
        throw std::runtime_error("clahe: log_floor must lie in (0,1)");

    const LumaMap luma = luminance(exposed);
    const double log_lo = std::log10(params.log_floor);

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    std::vector<double> hist(params.bins, 0.0);
    for (double y : luma.values) {
        const double ly = std::log10(std::max(y, params.log_floor));
        vmin = std::min(vmin, ly);
        vmax = std::max(vmax, ly);
        const double t = (ly - log_lo) / (0.0 - log_lo);
        int b = static_cast<int>(t * params.bins);
        b = std::clamp(b, 0, params.bins - 1);
        hist[b] += 1.0;
    }
    if (!(vmax > vmin))
        throw std::runtime_error("clahe: degenerate luminance range");

    // Clip above clip_limit * uniform count, hand the excess back uniformly.
    const double uniform = static_cast<double>(luma.values.size()) / params.bins;
    const double limit = params.clip_limit * uniform;
    double excess = 0.0;
    if (std::isfinite(limit)) {
        for (double& h : hist) {
            if (h > limit) {
                excess += h - limit;
                h = limit;
            }
        }
        const double share = excess / params.bins;
        for (double& h : hist) h += share;
    }

    double total = 0.0;
    for (double h : hist) total += h;
    std::vector<double> cdf(params.bins + 1, 0.0);
    for (int i = 0; i < params.bins; ++i) cdf[i + 1] = cdf[i] + hist[i] / total;
    cdf[params.bins] = 1.0;

    Crf out;
    out.name = "clahe";
    out.samples.resize(kCrfGridSize);
    for (int i = 0; i < kCrfGridSize; ++i) {
        const double u = static_cast<double>(i) / (kCrfGridSize - 1);
        const double lu = std::log10(std::max(u, params.log_floor));
        const double t = std::clamp((lu - log_lo) / (0.0 - log_lo), 0.0, 1.0);
        const double pos = t * params.bins;
        const int b = std::min(static_cast<int>(pos), params.bins - 1);
        const double frac = pos - b;
        out.samples[i] = cdf[b] + (cdf[b + 1] - cdf[b]) * frac;
    }
    out.samples.front() = 0.0;
    out.samples.back() = 1.0;
    out.projected = project_monotone(out.samples);
    return out;
}

double apply_crf(double linear, const Crf& crf) {
    const int n = crf.grid_size();
    const double pos = linear * (n - 1);
    int i = static_cast<int>(pos);
    i = std::clamp(i, 0, n - 2);
    const double t = pos - i;
    return crf.samples[i] + (crf.samples[i + 1] - crf.samples[i]) * t;
}

HdrImage apply_crf(const HdrImage& linear, const Crf& crf) {
    HdrImage out = linear;
    for (double& v : out.pixels) v = apply_crf(v, crf);
    return out;
}

Crf invert_crf(const Crf& crf) {
    const int n = crf.grid_size();
    std::vector<double> g = crf.samples;
    bool flat = true;
    for (int i = 1; i < n; ++i)
        if (g[i] != g[0]) flat = false;
    if (flat) throw std::runtime_error("crf: curve has zero total variation");

    // Strictly increasing version: monotone projection plus a tie-breaking slope.
    for (int i = 1; i < n; ++i) g[i] = std::max(g[i], g[i - 1]);
    for (int i = 0; i < n; ++i) g[i] += 1e-6 * static_cast<double>(i) / (n - 1);
    const double lo = g.front(), hi = g.back();
    for (double& v : g) v = (v - lo) / (hi - lo);

    Crf inv;
    inv.name = crf.name + "_inv";
    inv.samples.resize(n);
    int j = 0;
    for (int i = 0; i < n; ++i) {
        const double v = static_cast<double>(i) / (n - 1);
        while (j + 2 < n && g[j + 1] <= v) ++j;
        const double g0 = g[j], g1 = g[j + 1];
        const double t = g1 > g0 ? std::clamp((v - g0) / (g1 - g0), 0.0, 1.0) : 0.0;
        inv.samples[i] = (j + t) / (n - 1);
    }
    inv.samples.front() = 0.0;
    inv.samples.back() = 1.0;
    return inv;
}

void write_crf_csv(const Crf& crf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "irradiance,brightness\n";
    const int n = crf.grid_size();
    char buf[64];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", static_cast<double>(i) / (n - 1),
                      crf.samples[i]);
        out << buf;
    }
}

}  // namespace hdrbench
