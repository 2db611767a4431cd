#include "relight/tile_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relight/errors.hpp"
#include "relight/rng.hpp"

namespace relight {
namespace {

std::vector<int> nominal_positions(int dim, int tile_px, int stride) {
    const int limit = dim - tile_px;
    std::vector<int> pos;
    for (int p = 0; p < limit; p += stride) pos.push_back(p);
    pos.push_back(limit);  // last tile touches the edge
    return pos;
}

// Uniform integer in [-amp, amp].
int jitter_offset(std::mt19937_64& g, int amp) {
    return static_cast<int>(rng::uniform01(g) * (2 * amp + 1)) - amp;
}

}  // namespace

TileGrid make_tile_grid(int height, int width, int tile_px, double overlap,
                        std::uint64_t jitter_seed, bool jitter) {
    if (tile_px < kMinTileSize) {
        throw InvalidInput("tile size " + std::to_string(tile_px) + " below the minimum of " +
                           std::to_string(kMinTileSize));
    }
    if (tile_px > std::min(height, width)) {
        throw InvalidInput("tile size " + std::to_string(tile_px) + " exceeds the " +
                           std::to_string(height) + "x" + std::to_string(width) + " image");
    }
    if (!(overlap >= 0.0 && overlap < 1.0)) throw InvalidInput("overlap must be in [0, 1)");

    const int stride = std::max(1, static_cast<int>(std::lround(tile_px * (1.0 - overlap))));
    std::vector<int> ys = nominal_positions(height, tile_px, stride);
    std::vector<int> xs = nominal_positions(width, tile_px, stride);

    if (jitter) {
        // Consecutive jittered origins must stay within tile_px of each
        // other or coverage breaks, so the +-stride/2 amplitude is capped
        // by (tile_px - stride)/2; edge positions stay pinned so the image
        // borders stay covered.
        const int amp = std::max(0, std::min(stride / 2, (tile_px - stride) / 2));
        auto g = rng::stream(jitter_seed, 0);
        auto apply = [&](std::vector<int>& pos, int dim) {
            for (std::size_t i = 1; i + 1 < pos.size(); ++i) {
                pos[i] = std::clamp(pos[i] + jitter_offset(g, amp), 0, dim - tile_px);
            }
        };
        apply(ys, height);
        apply(xs, width);
    }

    TileGrid grid;
    grid.height = height;
    grid.width = width;
    grid.tile_px = tile_px;
    grid.overlap = overlap;
    grid.windows.reserve(ys.size() * xs.size());
    grid.origins.reserve(ys.size() * xs.size());
    for (int y : ys) {
        for (int x : xs) {
            grid.windows.push_back(Window::native_block(x, y, tile_px, width, height));
            grid.origins.emplace_back(x, y);
        }
    }
    return grid;
}

std::vector<float> make_tile_weights(int d, WeightKind kind) {
    if (d <= 0) throw InvalidInput("weight plane needs a positive tile size");
    std::vector<float> w(static_cast<std::size_t>(d) * d, 1.0f);
    if (kind == WeightKind::Uniform) return w;
    constexpr double kFloor = 1e-3;
    constexpr double kPi = 3.14159265358979323846;
    std::vector<double> axis(d);
    for (int i = 0; i < d; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * (i + 0.5) / d);
        axis[i] = kFloor + (1.0 - kFloor) * hann;
    }
    for (int y = 0; y < d; ++y) {
        for (int x = 0; x < d; ++x) w[static_cast<std::size_t>(y) * d + x] = static_cast<float>(axis[y] * axis[x]);
    }
    return w;
}

}  // namespace relight
