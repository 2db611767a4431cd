#include "relight/sampling.hpp"

#include <string>

#include "relight/detail/pixel_math.hpp"
#include "relight/kernels.hpp"

namespace relight {
namespace {

void clamp_rgb_range(Image& img) {
    // Bilinear extrapolation at borders can overshoot by a hair; RGB
    // samples stay in [0,1] after every public operation.
    if (img.color_space == ColorSpace::Lab) return;
    for (float& v : img.data) v = detail::clamp01(v);
}

}  // namespace

Tile sample(const Image& img, const Window& win, int d) {
    win.validate();
    if (d < kMinTileSize) {
        throw InvalidInput("tile size " + std::to_string(d) + " below the minimum of " +
                           std::to_string(kMinTileSize));
    }
    if (img.height < 2 || img.width < 2) throw InvalidInput("image too small to sample");
    Tile tile;
    tile.size = d;
    tile.channels = img.channels;
    tile.color_space = img.color_space;
    tile.source_window = win;
    tile.data.resize(static_cast<std::size_t>(d) * d * img.channels);
    kernel::sample_window(img.data.data(), img.height, img.width, img.channels, win,
                          tile.data.data(), d);
    if (tile.color_space != ColorSpace::Lab) {
        for (float& v : tile.data) v = detail::clamp01(v);
    }
    return tile;
}

Fragment reconstruct(const Tile& tile, int height, int width) {
    tile.source_window.validate();
    if (tile.size < 2 || height < 1 || width < 1) {
        throw InvalidInput("reconstruct needs a tile of side >= 2 and a positive target extent");
    }
    Fragment out;
    out.image = Image::make(height, width, tile.channels, tile.color_space);
    out.support.assign(static_cast<std::size_t>(height) * width, 0);
    kernel::reconstruct_window(tile.data.data(), tile.size, tile.channels, tile.source_window,
                               out.image.data.data(), out.support.data(), height, width);
    clamp_rgb_range(out.image);
    return out;
}

}  // namespace relight
