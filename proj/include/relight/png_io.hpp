#pragma once

#include <string>

#include "relight/image.hpp"

namespace relight {

// PNG, 8- or 16-bit, grayscale or RGB; alpha is stripped, palette and
// low-bit grayscale are expanded. Values map linearly to [0,1]; the
// samples are assumed sRGB-encoded.
Image read_png(const std::string& path);
void write_png(const std::string& path, const Image& img, int bit_depth = 8);

// Raw planar float32, little endian, 16-byte header: magic "RAWF",
// u32 height, u32 width, u32 channels. Lossless intermediate storage.
Image read_rawf32(const std::string& path);
void write_rawf32(const std::string& path, const Image& img);

// Dispatch on extension: .png or .rawf32.
Image read_image(const std::string& path);
void write_image(const std::string& path, const Image& img, int png_bit_depth = 8);

}  // namespace relight
