#pragma once

#include <array>
#include <string>

#include "hdrbench/baselines.hpp"
#include "hdrbench/image.hpp"

namespace hdrbench {

struct ScoreTable;  // stats.hpp

// Display the metrics are calibrated against: a chosen luminance percentile
// of each image is anchored to target_nits.
struct DisplayModel {
    double target_nits = 500.0;       // cd/m^2
    double anchor_percentile = 95.0;  // 95 for EV-5, 90 for EV-10
    double diagonal_inches = 24.0;
    int resolution_w = 1920;
    int resolution_h = 1200;
    double viewing_distance_m = 0.5;
};

// Rational-power fit from absolute luminance to perceptually uniform units.
// Defaults are the published banding-glare fit.
struct PuEncoding {
    std::array<double, 7> coefficients = {0.353487901,    0.3734658629, 8.277049286e-05,
                                          0.9062562627,   0.09150303166, 0.9099517204,
                                          596.3148142};
    double min_nits = 0.005;
    double max_nits = 10000.0;
};

// Multiplier that brings the anchor percentile of the image's luminance to
// the display target.
double anchor_scale(const HdrImage& image, const DisplayModel& display);

// Independent mode: the image is scaled by its own anchor_scale.
HdrImage anchor_to_display(const HdrImage& image, const DisplayModel& display);

// Shared mode: reuse a scale computed from the reference image.
HdrImage anchor_with_scale(const HdrImage& image, double scale);

// V(Y) on luminance clamped into [min_nits, max_nits].
double pu21_encode(double nits, const PuEncoding& enc);
HdrImage pu21_encode(const HdrImage& absolute, const PuEncoding& enc);

// PSNR peak used by the PU metrics: V(target_nits).
double pu_peak(const PuEncoding& enc, const DisplayModel& display);

// PSNR over PU-encoded channels of two anchored images. Identical images
// return +infinity (rendered as "inf"; aggregation caps at 100 dB).
double pu_psnr(const HdrImage& reference, const HdrImage& test, const PuEncoding& enc,
               double peak);

// Mean SSIM on PU-encoded luminance, 11x11 Gaussian window sigma 1.5,
// K1 = 0.01, K2 = 0.03, dynamic range = peak.
double pu_ssim(const HdrImage& reference, const HdrImage& test, const PuEncoding& enc,
               double peak);

// Straight PSNR on raw linear values; peak defaults to max(reference).
double linear_psnr(const HdrImage& reference, const HdrImage& test, double peak = 0.0);

enum class Metric { PuPsnr, PuSsim, LinearPsnr };

Metric metric_from_name(const std::string& name);
std::string metric_name(Metric m);

double compute_metric(Metric metric, const HdrImage& anchored_reference,
                      const HdrImage& anchored_test, const PuEncoding& enc, double peak);

// Metric on alpha-premultiplied anchored images; errors when the mask is all
// zero ("empty saturated region").
double masked_score(Metric metric, const HdrImage& anchored_reference,
                    const HdrImage& anchored_test, const AlphaMap& mask, const PuEncoding& enc,
                    double peak);

double compute_ppd(const DisplayModel& display);

// Writes <out_dir>/ref.pfm, <out_dir>/test.pfm (absolute cd/m^2) and a
// params.json with the display geometry for an external HDR-VDP-3 run.
void export_vdp_pair(const HdrImage& anchored_reference, const HdrImage& anchored_test,
                     const DisplayModel& display, const std::string& scene,
                     const std::string& method, const std::string& out_dir);

// Reads a "scene,method,q_jod" CSV produced by an external HDR-VDP-3 run into
// the table under the given metric label.
int ingest_vdp_scores(const std::string& csv_path, ScoreTable& table,
                      const std::string& metric_label = "q_jod");

}  // namespace hdrbench
