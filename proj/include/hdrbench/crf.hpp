#pragma once

#include <string>
#include <vector>

#include "hdrbench/image.hpp"

namespace hdrbench {

inline constexpr int kCrfGridSize = 1024;

// Monotone tone curve g: [0,1] -> [0,1] sampled on a uniform irradiance grid.
struct Crf {
    std::string name;
    std::vector<double> samples;    // g(i / (N-1)), N >= 2
    bool projected = false;         // true when the monotone projection moved a sample

    int grid_size() const { return static_cast<int>(samples.size()); }
};

struct CrfDatabase {
    std::vector<Crf> curves;
};

Crf identity_crf(int grid = kCrfGridSize);

// Parses measured-response records by scanning for the "I =" / "B =" markers;
// each curve is resampled to the uniform 1024-point grid, normalized to
// g(0)=0, g(1)=1 and made monotone by cumulative-max projection.
CrfDatabase parse_dorf(std::istream& text);
CrfDatabase load_dorf(const std::string& path);

// The database member closest (least squared deviation on the grid) to the
// pointwise mean curve; ties break to the lowest index.
const Crf& mean_crf(const CrfDatabase& db);

struct ClaheParams {
    double clip_limit = 4.0;   // multiple of the uniform bin count, > 1
    int bins = 256;
    double log_floor = 1e-4;   // fraction of the clip point
};

// Global contrast-limited histogram equalization of log10 luminance, returned
// as a tone curve on the linear [0,1] irradiance grid.
Crf clahe_crf(const HdrImage& exposed, const ClaheParams& params = {});

// Linear interpolation of the lookup table. Input must be pre-clipped to [0,1].
double apply_crf(double linear, const Crf& crf);
HdrImage apply_crf(const HdrImage& linear, const Crf& crf);

// Numeric inverse resampled on the uniform grid. Flat runs are widened by a
// 1e-6 tie-breaking slope before inversion.
Crf invert_crf(const Crf& crf);

void write_crf_csv(const Crf& crf, const std::string& path);

}  // namespace hdrbench
