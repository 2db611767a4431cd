#pragma once

#include "relight/enhancer.hpp"
#include "relight/image.hpp"
#include "relight/tile_grid.hpp"

namespace relight {

struct EnsembleResult {
    Image estimate;  // sRGB
    Image coverage;  // single plane: number of tiles covering each pixel
};

// Short-scale estimate: enhance every grid window as a native-resolution
// crop in LAB, then average the overlapping results with the tile weight
// plane. Tiles may be enhanced in parallel; accumulation always runs in
// canonical window order, so the output is bit-identical for any worker
// count.
EnsembleResult averaged_estimate(const Image& img, Enhancer& enhancer, const TileGrid& grid,
                                 WeightKind weights, float gain);

// Long-scale estimate: the whole image resampled to d x d, enhanced once,
// and resampled back.
Image long_scale_estimate(const Image& img, Enhancer& enhancer, int d, float gain);

// How much two overlapping crops disagree after independent enhancement:
// per-pixel absolute difference averaged over channels, on the overlap.
struct Disagreement {
    Image heatmap;  // 1 channel, overlap extent
    double mean = 0.0;
    int x0 = 0, y0 = 0;  // overlap rectangle, pixel coords
};

Disagreement crop_disagreement(const Image& img, Enhancer& enhancer, const Window& win_a,
                               const Window& win_b, float gain);

}  // namespace relight
