#pragma once

#include <vector>

#include "relight/image.hpp"

namespace relight {

// U-net style enhancers reject grids with too few samples.
constexpr int kMinTileSize = 32;

// Axis-aligned sub-rectangle of the unit square, in normalized
// coordinates. Pixel centers sit at (i + 0.5) / N. A window never leaves
// the viewport: 0 <= x0, y0 and x0 + w <= 1, y0 + h <= 1.
struct Window {
    double x0 = 0.0;
    double y0 = 0.0;
    double w = 1.0;
    double h = 1.0;

    static Window full() { return {0.0, 0.0, 1.0, 1.0}; }

    // Window spanning exactly the pixel block [px_x, px_x+size) x
    // [px_y, px_y+size) of an img_w x img_h image.
    static Window native_block(int px_x, int px_y, int size, int img_w, int img_h);

    void validate() const;

    // True when this window lands exactly on a native d x d pixel block;
    // fills the block's top-left pixel coordinates.
    bool native_block_of(int img_w, int img_h, int d, int* px_x, int* px_y) const;

    bool overlaps(const Window& o) const;
};

// A d x d sampled view of the image, remembering where it came from.
struct Tile {
    int size = 0;
    int channels = 0;
    ColorSpace color_space = ColorSpace::SRGB;
    std::vector<float> data;  // planar, like Image
    Window source_window;

    const float* plane(int c) const { return data.data() + static_cast<std::int64_t>(c) * size * size; }
    float* plane(int c) { return data.data() + static_cast<std::int64_t>(c) * size * size; }
};

}  // namespace relight
