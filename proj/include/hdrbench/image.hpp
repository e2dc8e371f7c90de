#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hdrbench {

// Linear relative-radiance RGB raster. Values are unitless until anchored
// to absolute display luminance (metrics.hpp).
struct HdrImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // 3 values per pixel, row-major
    std::string color_space_tag = "linear Rec.709 primaries";

    HdrImage() = default;
    HdrImage(int w, int h, double fill = 0.0);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    double* px(int x, int y) {
        return &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
    }
    const double* px(int x, int y) const {
        return &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
    }

    // Throws std::runtime_error on non-finite or negative components or a
    // pixel count that disagrees with the dimensions.
    void validate() const;
};

// Display-encoded capture, every component on the k/(2^bit_depth - 1) lattice.
struct LdrImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;
    int bit_depth = 8;

    LdrImage() = default;
    LdrImage(int w, int h, int bits, double fill = 0.0);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    double* px(int x, int y) {
        return &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
    }
    const double* px(int x, int y) const {
        return &pixels[3 * (static_cast<std::size_t>(y) * width + x)];
    }

    void validate() const;
};

// Per-pixel non-negative scalar field (luminance, channel maxima, ...).
struct LumaMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    LumaMap() = default;
    LumaMap(int w, int h, double fill = 0.0);
};

// Rec.709 luma weights on linear components.
LumaMap luminance(const HdrImage& image);

// Per-pixel max over the three channels.
LumaMap channel_max(const HdrImage& image);

double max_component(const HdrImage& image);

// Nearest-rank percentile: sorted ascending, element at 1-based index
// ceil(p/100 * N). p must lie in (0, 100), values must be non-empty.
double percentile(std::vector<double> values, double p);

// Scale the shorter relative side up with bilinear filtering so the target
// fits, then center-crop to exactly w x h.
HdrImage resize_center_crop(const HdrImage& image, int w, int h);

// image * e, componentwise.
HdrImage scale_exposure(const HdrImage& image, double e);

}  // namespace hdrbench
