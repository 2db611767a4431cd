#pragma once

#include "relight/image.hpp"

namespace relight {

// CIELAB (D65) from encoded sRGB, both 3-channel planar.
Image rgb_to_lab(const Image& img);

// Inverse of rgb_to_lab; out-of-gamut results are clamped to [0,1].
Image lab_to_rgb(const Image& img);

}  // namespace relight
