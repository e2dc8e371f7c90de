#include "hdrbench/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdrbench {

HdrImage::HdrImage(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw std::runtime_error("HdrImage: dimensions must be positive");
    pixels.assign(3 * pixel_count(), fill);
}

void HdrImage::validate() const {
    if (width < 1 || height < 1)
        throw std::runtime_error("HdrImage: dimensions must be positive");
    if (pixels.size() != 3 * pixel_count())
        throw std::runtime_error("HdrImage: pixel count does not match dimensions");
    for (double v : pixels) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::runtime_error("HdrImage: components must be finite and non-negative");
    }
}

LdrImage::LdrImage(int w, int h, int bits, double fill) : width(w), height(h), bit_depth(bits) {
    if (w < 1 || h < 1)
        throw std::runtime_error("LdrImage: dimensions must be positive");
    if (bits < 2 || bits > 16)
        throw std::runtime_error("LdrImage: bit depth out of range [2,16]");
    pixels.assign(3 * pixel_count(), fill);
}

void LdrImage::validate() const {
    if (width < 1 || height < 1)
        throw std::runtime_error("LdrImage: dimensions must be positive");
    if (pixels.size() != 3 * pixel_count())
        throw std::runtime_error("LdrImage: pixel count does not match dimensions");
    const double levels = static_cast<double>((1u << bit_depth) - 1u);
    for (double v : pixels) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::runtime_error("LdrImage: components must lie in [0,1]");
        const double k = v * levels;
        if (std::abs(k - std::round(k)) > 1e-9)
            throw std::runtime_error("LdrImage: component off the quantization lattice");
    }
}

LumaMap::LumaMap(int w, int h, double fill) : width(w), height(h) {
    values.assign(static_cast<std::size_t>(w) * h, fill);
}

LumaMap luminance(const HdrImage& image) {
    LumaMap out(image.width, image.height);
    const std::size_t n = image.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = &image.pixels[3 * i];
        out.values[i] = 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2];
    }
    return out;
}

LumaMap channel_max(const HdrImage& image) {
    LumaMap out(image.width, image.height);
    const std::size_t n = image.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = &image.pixels[3 * i];
        out.values[i] = std::max(p[0], std::max(p[1], p[2]));
    }
    return out;
}

double max_component(const HdrImage& image) {
    double m = 0.0;
    for (double v : image.pixels) m = std::max(m, v);
    return m;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty())
        throw std::runtime_error("percentile: empty input");
    if (!(p > 0.0 && p < 100.0))
        throw std::runtime_error("percentile: p must lie in (0,100)");
    const double n = static_cast<double>(values.size());
    // p*N first keeps integer cases exact before the division.
    auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
    rank = std::min(std::max<std::size_t>(rank, 1), values.size());
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[rank - 1];
}

namespace {

HdrImage resize_bilinear(const HdrImage& src, int w, int h) {
    HdrImage out(w, h);
    const double sx = static_cast<double>(src.width) / w;
    const double sy = static_cast<double>(src.height) / h;
    for (int y = 0; y < h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double ty = fy - y0;
        for (int x = 0; x < w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double tx = fx - x0;
            const double* p00 = src.px(x0, y0);
            const double* p10 = src.px(x1, y0);
            const double* p01 = src.px(x0, y1);
            const double* p11 = src.px(x1, y1);
            double* q = out.px(x, y);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + (p10[c] - p00[c]) * tx;
                const double bot = p01[c] + (p11[c] - p01[c]) * tx;
                q[c] = top + (bot - top) * ty;
            }
        }
    }
    return out;
}

}  // namespace

HdrImage resize_center_crop(const HdrImage& image, int w, int h) {
    if (w < 1 || h < 1)
        throw std::runtime_error("resize_center_crop: degenerate target");
    const double s = std::max(static_cast<double>(w) / image.width,
                              static_cast<double>(h) / image.height);
    int sw = std::max(w, static_cast<int>(std::lround(image.width * s)));
    int sh = std::max(h, static_cast<int>(std::lround(image.height * s)));

    const HdrImage* scaled = &image;
    HdrImage tmp;
    if (sw != image.width || sh != image.height) {
        tmp = resize_bilinear(image, sw, sh);
        scaled = &tmp;
    } else {
        sw = image.width;
        sh = image.height;
    }

    const int ox = (sw - w) / 2;
    const int oy = (sh - h) / 2;
    HdrImage out(w, h);
    out.color_space_tag = image.color_space_tag;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double* p = scaled->px(x + ox, y + oy);
            double* q = out.px(x, y);
            q[0] = p[0];
            q[1] = p[1];
            q[2] = p[2];
        }
    return out;
}

HdrImage scale_exposure(const HdrImage& image, double e) {
    HdrImage out = image;
    for (double& v : out.pixels) v *= e;
    return out;
}

}  // namespace hdrbench
