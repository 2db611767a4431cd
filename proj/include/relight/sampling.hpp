#pragma once

#include <cstdint>
#include <vector>

#include "relight/geometry.hpp"
#include "relight/image.hpp"

namespace relight {

// Resample the window's content onto a d x d tile (bilinear; linear
// extrapolation at image borders). When the window lands exactly on a
// native d x d pixel block the tile is a bit-exact crop.
Tile sample(const Image& img, const Window& win, int d);

// A tile mapped back onto a pixel grid: values where the tile has
// support, plus the 0/1 support mask (1 exactly where a pixel center
// falls inside the tile's source window).
struct Fragment {
    Image image;
    std::vector<std::uint8_t> support;
};

Fragment reconstruct(const Tile& tile, int height, int width);

}  // namespace relight
