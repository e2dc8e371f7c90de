#include "hdrbench/hdr_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hdrbench {

void rgbe_decode(const unsigned char rgbe[4], double rgb[3]) {
    if (rgbe[3] == 0) {
        rgb[0] = rgb[1] = rgb[2] = 0.0;
        return;
    }
    const double scale = std::ldexp(1.0, static_cast<int>(rgbe[3]) - 136);
    rgb[0] = (rgbe[0] + 0.5) * scale;
    rgb[1] = (rgbe[1] + 0.5) * scale;
    rgb[2] = (rgbe[2] + 0.5) * scale;
}

void rgbe_encode(const double rgb[3], unsigned char rgbe[4]) {
    const double v = std::max(rgb[0], std::max(rgb[1], rgb[2]));
    if (v < 1e-38) {
        rgbe[0] = rgbe[1] = rgbe[2] = rgbe[3] = 0;
        return;
    }
    int e = 0;
    const double m = std::frexp(v, &e);
    const double d = m * 256.0 / v;
    rgbe[0] = static_cast<unsigned char>(rgb[0] * d);
    rgbe[1] = static_cast<unsigned char>(rgb[1] * d);
    rgbe[2] = static_cast<unsigned char>(rgb[2] * d);
    rgbe[3] = static_cast<unsigned char>(e + 128);
}

namespace {

std::string read_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("radiance: unexpected end of header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void read_flat_scanline(std::istream& in, int width, std::vector<unsigned char>& row,
                        const unsigned char* first4) {
    // Old-style stream of raw RGBE groups; (1,1,1,n) repeats the previous
    // pixel n<<shift times.
    int x = 0;
    int shift = 0;
    unsigned char px[4];
    bool have_first = first4 != nullptr;
    while (x < width) {
        if (have_first) {
            std::memcpy(px, first4, 4);
            have_first = false;
        } else if (!in.read(reinterpret_cast<char*>(px), 4)) {
            throw std::runtime_error("radiance: truncated scanline");
        }
        if (px[0] == 1 && px[1] == 1 && px[2] == 1) {
            if (x == 0)
                throw std::runtime_error("radiance: repeat code with no previous pixel");
            long count = static_cast<long>(px[3]) << shift;
            if (x + count > width)
                throw std::runtime_error("radiance: scanline length mismatch");
            for (long i = 0; i < count; ++i) {
                std::memcpy(&row[4 * x], &row[4 * (x - 1)], 4);
                ++x;
            }
            shift += 8;
        } else {
            std::memcpy(&row[4 * x], px, 4);
            ++x;
            shift = 0;
        }
    }
}

void read_rle_scanline(std::istream& in, int width, std::vector<unsigned char>& row) {
    // Four planes, each a sequence of run (count > 128) or literal packets.
    std::vector<unsigned char> plane(width);
    for (int c = 0; c < 4; ++c) {
        int x = 0;
        while (x < width) {
            const int code = in.get();
            if (code < 0) throw std::runtime_error("radiance: truncated scanline");
            if (code > 128) {
                const int count = code - 128;
                const int value = in.get();
                if (value < 0) throw std::runtime_error("radiance: truncated scanline");
                if (x + count > width)
                    throw std::runtime_error("radiance: scanline length mismatch");
                std::fill_n(plane.begin() + x, count, static_cast<unsigned char>(value));
                x += count;
            } else {
                if (code == 0) throw std::runtime_error("radiance: zero-length packet");
                if (x + code > width)
                    throw std::runtime_error("radiance: scanline length mismatch");
                if (!in.read(reinterpret_cast<char*>(plane.data() + x), code))
                    throw std::runtime_error("radiance: truncated scanline");
                x += code;
            }
        }
        for (int i = 0; i < width; ++i) row[4 * i + c] = plane[i];
    }
}

void write_rle_plane(const std::vector<unsigned char>& plane, std::ostream& out) {
    const int n = static_cast<int>(plane.size());
    int x = 0;
    while (x < n) {
        // Find the next run of at least 4 equal bytes.
        int run_start = x;
        int run_len = 0;
        while (run_start < n) {
            run_len = 1;
            while (run_start + run_len < n && run_len < 127 &&
                   plane[run_start + run_len] == plane[run_start])
                ++run_len;
            if (run_len >= 4) break;
            run_start += run_len;
        }
        if (run_start >= n || run_len < 4) run_start = n;

        int lit = run_start - x;
        while (lit > 0) {
            const int chunk = std::min(lit, 128);
            out.put(static_cast<char>(chunk));
            out.write(reinterpret_cast<const char*>(plane.data() + x), chunk);
            x += chunk;
            lit -= chunk;
        }
        if (run_start < n) {
            out.put(static_cast<char>(128 + run_len));
            out.put(static_cast<char>(plane[run_start]));
            x += run_len;
        }
    }
}

float byteswap_float(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    u = ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) |
        ((u & 0x0000ff00u) << 8) | ((u & 0x000000ffu) << 24);
    std::memcpy(&f, &u, 4);
    return f;
}

constexpr bool host_little_endian() {
    return std::endian::native == std::endian::little;
}

}  // namespace

HdrImage decode_radiance(std::istream& in) {
    std::string magic = read_line(in);
    if (magic.rfind("#?", 0) != 0)
        throw std::runtime_error("radiance: malformed header (missing #? magic)");

    bool format_seen = false;
    for (;;) {
        std::string line = read_line(in);
        if (line.empty()) break;
        if (line.rfind("FORMAT=", 0) == 0) {
            if (line != "FORMAT=32-bit_rle_rgbe")
                throw std::runtime_error("radiance: unsupported format string: " + line);
            format_seen = true;
        }
        // Other header attributes (EXPOSURE, comments) are carried but unused.
    }
    if (!format_seen)
        throw std::runtime_error("radiance: malformed header (no FORMAT line)");

    std::string res = read_line(in);
    int w = 0, h = 0;
    {
        std::istringstream rs(res);
        std::string ytag, xtag;
        if (!(rs >> ytag >> h >> xtag >> w) || ytag != "-Y" || xtag != "+X" || w < 1 || h < 1)
            throw std::runtime_error("radiance: malformed resolution line: " + res);
    }

    HdrImage img(w, h);
    std::vector<unsigned char> row(4 * static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        unsigned char head[4];
        if (!in.read(reinterpret_cast<char*>(head), 4))
            throw std::runtime_error("radiance: truncated scanline");
        if (w >= 8 && w <= 32767 && head[0] == 2 && head[1] == 2 &&
            ((head[2] << 8) | head[3]) == w) {
            read_rle_scanline(in, w, row);
        } else {
            read_flat_scanline(in, w, row, head);
        }
        for (int x = 0; x < w; ++x) rgbe_decode(&row[4 * x], img.px(x, y));
    }
    return img;
}

void encode_radiance(const HdrImage& image, std::ostream& out) {
    out << "#?RADIANCE\n";
    out << "FORMAT=32-bit_rle_rgbe\n";
    out << "\n";
    out << "-Y " << image.height << " +X " << image.width << "\n";

    const int w = image.width;
    std::vector<unsigned char> row(4 * static_cast<std::size_t>(w));
    const bool rle = w >= 8 && w <= 32767;
    std::vector<unsigned char> plane(rle ? w : 0);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < w; ++x) rgbe_encode(image.px(x, y), &row[4 * x]);
        if (rle) {
            const unsigned char head[4] = {2, 2, static_cast<unsigned char>(w >> 8),
                                           static_cast<unsigned char>(w & 0xff)};
            out.write(reinterpret_cast<const char*>(head), 4);
            for (int c = 0; c < 4; ++c) {
                for (int x = 0; x < w; ++x) plane[x] = row[4 * x + c];
                write_rle_plane(plane, out);
            }
        } else {
            out.write(reinterpret_cast<const char*>(row.data()), row.size());
        }
    }
    if (!out) throw std::runtime_error("radiance: write failure");
}

HdrImage decode_pfm(std::istream& in) {
    std::string type;
    in >> type;
    if (type == "Pf")
        throw std::runtime_error("pfm: grayscale Pf not supported, expected color PF");
    if (type != "PF")
        throw std::runtime_error("pfm: malformed header (expected PF)");
    int w = 0, h = 0;
    double scale = 0.0;
    if (!(in >> w >> h >> scale) || w < 1 || h < 1 || scale == 0.0)
        throw std::runtime_error("pfm: malformed header");
    in.get();  // single whitespace byte before the raster

    const bool file_le = scale < 0.0;
    HdrImage img(w, h);
    std::vector<float> rowbuf(3 * static_cast<std::size_t>(w));
    for (int y = h - 1; y >= 0; --y) {  // rows stored bottom-up
        if (!in.read(reinterpret_cast<char*>(rowbuf.data()), rowbuf.size() * sizeof(float)))
            throw std::runtime_error("pfm: truncated raster");
        double* dst = img.px(0, y);
        for (std::size_t i = 0; i < rowbuf.size(); ++i) {
            float f = rowbuf[i];
            if (file_le != host_little_endian()) f = byteswap_float(f);
            dst[i] = f;
        }
    }
    return img;
}

void encode_pfm(const HdrImage& image, std::ostream& out) {
    out << "PF\n" << image.width << " " << image.height << "\n";
    out << (host_little_endian() ? "-1.0" : "1.0") << "\n";
    std::vector<float> rowbuf(3 * static_cast<std::size_t>(image.width));
    for (int y = image.height - 1; y >= 0; --y) {
        const double* src = image.px(0, y);
        for (std::size_t i = 0; i < rowbuf.size(); ++i)
            rowbuf[i] = static_cast<float>(src[i]);
        out.write(reinterpret_cast<const char*>(rowbuf.data()), rowbuf.size() * sizeof(float));
    }
    if (!out) throw std::runtime_error("pfm: write failure");
}

HdrImage load_hdr(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    const int c = in.peek();
    if (c == '#') return decode_radiance(in);
    if (c == 'P') return decode_pfm(in);
    throw std::runtime_error("unsupported image format: " + path);
}

void write_hdr(const HdrImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    encode_radiance(image, out);
}

void write_pfm(const HdrImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    encode_pfm(image, out);
}

void write_ldr_pfm(const LdrImage& image, const std::string& path) {
    HdrImage tmp(image.width, image.height);
    tmp.pixels = image.pixels;
    write_pfm(tmp, path);
}

LdrImage load_ldr_pfm(const std::string& path, int bit_depth) {
    const HdrImage raw = load_hdr(path);
    LdrImage out(raw.width, raw.height, bit_depth);
    const double levels = static_cast<double>((1u << bit_depth) - 1u);
    for (std::size_t i = 0; i < raw.pixels.size(); ++i) {
        const double v = std::clamp(raw.pixels[i], 0.0, 1.0);
        out.pixels[i] = std::round(v * levels) / levels;
    }
    return out;
}

}  // namespace hdrbench
