#include "hdrbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "hdrbench/hdr_io.hpp"
#include "hdrbench/stats.hpp"

namespace hdrbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_size(const HdrImage& a, const HdrImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::runtime_error("metric: image dimensions differ");
}

}  // namespace

double anchor_scale(const HdrImage& image, const DisplayModel& display) {
    LumaMap luma = luminance(image);
    double ref = percentile(luma.values, display.anchor_percentile);
    if (ref <= 0.0) throw std::runtime_error("anchor: percentile luminance is zero");
    return display.target_nits / ref;
}

HdrImage anchor_to_display(const HdrImage& image, const DisplayModel& display) {
    return anchor_with_scale(image, anchor_scale(image, display));
}

HdrImage anchor_with_scale(const HdrImage& image, double scale) {
    HdrImage out = image;
    for (double& v : out.pixels) v *= scale;
    return out;
}

double pu21_encode(double nits, const PuEncoding& enc) {
    const auto& p = enc.coefficients;
    double y = std::clamp(nits, enc.min_nits, enc.max_nits);
    double yp = std::pow(y, p[3]);
    double ratio = (p[0] + p[1] * yp) / (1.0 + p[2] * yp);
    double v = p[6] * (std::pow(ratio, p[4]) - p[5]);
    return std::max(v, 0.0);
}

HdrImage pu21_encode(const HdrImage& absolute, const PuEncoding& enc) {
    HdrImage out = absolute;
    for (double& v : out.pixels) v = pu21_encode(v, enc);
    return out;
}

double pu_peak(const PuEncoding& enc, const DisplayModel& display) {
    return pu21_encode(display.target_nits, enc);
}

double pu_psnr(const HdrImage& reference, const HdrImage& test, const PuEncoding& enc,
               double peak) {
    require_same_size(reference, test);
    HdrImage r = pu21_encode(reference, enc);
    HdrImage t = pu21_encode(test, enc);
    double se = 0.0;
    for (size_t i = 0; i < r.pixels.size(); ++i) {
        double d = r.pixels[i] - t.pixels[i];
        se += d * d;
    }
    double mse = se / static_cast<double>(r.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

// 1D Gaussian taps for the separable 11x11 SSIM window, normalized to sum 1.
std::array<double, 11> ssim_window() {
    std::array<double, 11> w{};
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        double d = i - 5;
        w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Valid-window separable convolution: output is (w-10) x (h-10).
std::vector<double> convolve_valid(const std::vector<double>& in, int w, int h) {
    static const std::array<double, 11> win = ssim_window();
    int ow = w - 10;
    int oh = h - 10;
    std::vector<double> tmp(static_cast<size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 11; ++k) acc += win[k] * in[static_cast<size_t>(y) * w + x + k];
            tmp[static_cast<size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 11; ++k)
                acc += win[k] * tmp[static_cast<size_t>(y + k) * ow + x];
            out[static_cast<size_t>(y) * ow + x] = acc;
        }
    return out;
}

}  // namespace

double pu_ssim(const HdrImage& reference, const HdrImage& test, const PuEncoding& enc,
               double peak) {
    require_same_size(reference, test);
    if (reference.width < 11 || reference.height < 11)
        throw std::runtime_error("pu_ssim: image smaller than the 11x11 window");

    LumaMap rl = luminance(reference);
    LumaMap tl = luminance(test);
    std::vector<double> r(rl.values.size()), t(tl.values.size());
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] = pu21_encode(rl.values[i], enc);
        t[i] = pu21_encode(tl.values[i], enc);
    }

    int w = reference.width;
    int h = reference.height;
    std::vector<double> rr(r.size()), tt(t.size()), rt(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        rr[i] = r[i] * r[i];
        tt[i] = t[i] * t[i];
        rt[i] = r[i] * t[i];
    }

    std::vector<double> mu_r = convolve_valid(r, w, h);
    std::vector<double> mu_t = convolve_valid(t, w, h);
    std::vector<double> m_rr = convolve_valid(rr, w, h);
    std::vector<double> m_tt = convolve_valid(tt, w, h);
    std::vector<double> m_rt = convolve_valid(rt, w, h);

    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    double acc = 0.0;
    for (size_t i = 0; i < mu_r.size(); ++i) {
        double var_r = m_rr[i] - mu_r[i] * mu_r[i];
        double var_t = m_tt[i] - mu_t[i] * mu_t[i];
        double cov = m_rt[i] - mu_r[i] * mu_t[i];
        double num = (2.0 * mu_r[i] * mu_t[i] + c1) * (2.0 * cov + c2);
        double den = (mu_r[i] * mu_r[i] + mu_t[i] * mu_t[i] + c1) * (var_r + var_t + c2);
        acc += num / den;
    }
    return acc / static_cast<double>(mu_r.size());
}

double linear_psnr(const HdrImage& reference, const HdrImage& test, double peak) {
    require_same_size(reference, test);
    if (peak <= 0.0) {
        for (double v : reference.pixels) peak = std::max(peak, v);
        if (peak <= 0.0) throw std::runtime_error("linear_psnr: reference peak is zero");
    }
    double se = 0.0;
    for (size_t i = 0; i < reference.pixels.size(); ++i) {
        double d = reference.pixels[i] - test.pixels[i];
        se += d * d;
    }
    double mse = se / static_cast<double>(reference.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

Metric metric_from_name(const std::string& name) {
    if (name == "pu-psnr") return Metric::PuPsnr;
    if (name == "pu-ssim") return Metric::PuSsim;
    if (name == "linear-psnr") return Metric::LinearPsnr;
    throw std::runtime_error("unknown metric: " + name);
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::PuPsnr: return "pu-psnr";
        case Metric::PuSsim: return "pu-ssim";
        case Metric::LinearPsnr: return "linear-psnr";
    }
    throw std::logic_error("metric_name");
}

double compute_metric(Metric metric, const HdrImage& anchored_reference,
                      const HdrImage& anchored_test, const PuEncoding& enc, double peak) {
    switch (metric) {
        case Metric::PuPsnr: return pu_psnr(anchored_reference, anchored_test, enc, peak);
        case Metric::PuSsim: return pu_ssim(anchored_reference, anchored_test, enc, peak);
        case Metric::LinearPsnr: return linear_psnr(anchored_reference, anchored_test);
    }
    throw std::logic_error("compute_metric");
}

double masked_score(Metric metric, const HdrImage& anchored_reference,
                    const HdrImage& anchored_test, const AlphaMap& mask, const PuEncoding& enc,
                    double peak) {
    require_same_size(anchored_reference, anchored_test);
    if (mask.width != anchored_reference.width || mask.height != anchored_reference.height)
        throw std::runtime_error("masked_score: mask dimensions differ");
    bool any = false;
    for (double a : mask.values)
        if (a > 0.0) { any = true; break; }
    if (!any) throw std::runtime_error("masked_score: empty saturated region");

    HdrImage r = anchored_reference;
    HdrImage t = anchored_test;
    for (size_t i = 0; i < mask.values.size(); ++i) {
        double a = mask.values[i];
        for (int c = 0; c < 3; ++c) {
            r.pixels[i * 3 + c] *= a;
            t.pixels[i * 3 + c] *= a;
        }
    }
    return compute_metric(metric, r, t, enc, peak);
}

double compute_ppd(const DisplayModel& display) {
    double w = display.resolution_w;
    double h = display.resolution_h;
    double width_m = display.diagonal_inches * 0.0254 * w / std::sqrt(w * w + h * h);
    double pix_m = width_m / w;
    double pix_deg =
        2.0 * std::atan(pix_m / (2.0 * display.viewing_distance_m)) * 180.0 / kPi;
    return 1.0 / pix_deg;
}

void export_vdp_pair(const HdrImage& anchored_reference, const HdrImage& anchored_test,
                     const DisplayModel& display, const std::string& scene,
                     const std::string& method, const std::string& out_dir) {
    require_same_size(anchored_reference, anchored_test);
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_pfm(anchored_reference, (dir / "ref.pfm").string());
    write_pfm(anchored_test, (dir / "test.pfm").string());

    nlohmann::json j;
    j["scene"] = scene;
    j["method"] = method;
    j["ppd"] = compute_ppd(display);
    j["anchor"] = display.target_nits;
    j["percentile"] = display.anchor_percentile;
    std::ofstream f(dir / "params.json");
    if (!f) throw std::runtime_error("cannot write " + (dir / "params.json").string());
    f << j.dump(2) << "\n";
}

int ingest_vdp_scores(const std::string& csv_path, ScoreTable& table,
                      const std::string& metric_label) {
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + csv_path);
    // Header is required; tolerate a UTF-8 BOM and trailing CR.
    auto strip = [](std::string s) {
        if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) s.erase(0, 3);
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        return s;
    };
    if (strip(line) != "scene,method,q_jod")
        throw std::runtime_error("unexpected csv header in " + csv_path);

    int rows = 0;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string scene, method, value;
        if (!std::getline(ss, scene, ',') || !std::getline(ss, method, ',') ||
            !std::getline(ss, value, ','))
            throw std::runtime_error(csv_path + ":" + std::to_string(lineno) +
                                     ": expected scene,method,q_jod");
        size_t pos = 0;
        double q = std::stod(value, &pos);
        if (pos != value.size())
            throw std::runtime_error(csv_path + ":" + std::to_string(lineno) +
                                     ": bad q_jod value");
        table.set(metric_label, scene, method, q);
        ++rows;
    }
    return rows;
}

}  // namespace hdrbench
