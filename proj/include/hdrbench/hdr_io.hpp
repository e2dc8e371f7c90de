#pragma once

#include <iosfwd>
#include <string>

#include "hdrbench/image.hpp"

namespace hdrbench {

// Loads a Radiance RGBE (.hdr) or PFM (.pfm) file, decided by content.
HdrImage load_hdr(const std::string& path);

// Radiance RGBE with new-style RLE scanlines where the width permits.
void write_hdr(const HdrImage& image, const std::string& path);

// Little-endian color PFM (scale line -1.0), rows bottom-up.
void write_pfm(const HdrImage& image, const std::string& path);

// Stream variants used by the loaders and the tests.
HdrImage decode_radiance(std::istream& in);
HdrImage decode_pfm(std::istream& in);
void encode_radiance(const HdrImage& image, std::ostream& out);
void encode_pfm(const HdrImage& image, std::ostream& out);

// RGBE component codec. decode follows the (mantissa + 0.5) * 2^(E - 136)
// convention with E = 0 mapping to black.
void rgbe_decode(const unsigned char rgbe[4], double rgb[3]);
void rgbe_encode(const double rgb[3], unsigned char rgbe[4]);

// LDR rasters stored as PFM; on load every component is snapped back onto
// the k/(2^bits - 1) lattice.
void write_ldr_pfm(const LdrImage& image, const std::string& path);
LdrImage load_ldr_pfm(const std::string& path, int bit_depth);

}  // namespace hdrbench
