#pragma once

#include <cstdint>
#include <vector>

#include "relight/geometry.hpp"

namespace relight {

enum class WeightKind {
    Uniform,  // w = 1 everywhere on the tile
    Taper,    // separable raised cosine, 1 at center, floor 1e-3 at the border
};

// Jittered overlapping grid of native tile_px x tile_px windows covering
// an image. Windows are in canonical row-major order of their nominal
// (pre-jitter) positions; every pixel center is covered by at least one
// window by construction.
struct TileGrid {
    int height = 0, width = 0;
    int tile_px = 0;
    double overlap = 0.0;
    std::vector<Window> windows;
    std::vector<std::pair<int, int>> origins;  // pixel (x, y) of each window
};

// Nominal positions run at stride round(tile_px*(1-overlap)) >= 1 with the
// last position clamped to touch the image edge. Interior positions are
// then jittered by a uniform integer offset; first and last stay pinned
// and the jitter amplitude is capped so coverage survives any draw.
TileGrid make_tile_grid(int height, int width, int tile_px, double overlap,
                        std::uint64_t jitter_seed, bool jitter = true);

// The d x d per-sample weight plane for one tile.
std::vector<float> make_tile_weights(int d, WeightKind kind);

}  // namespace relight
