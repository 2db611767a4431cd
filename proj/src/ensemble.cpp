#include "relight/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "relight/detail/pixel_math.hpp"
#include "relight/kernels.hpp"
#include "relight/log.hpp"
#include "relight/sampling.hpp"

namespace relight {
namespace {

// Tiles enhanced per parallel wave before the sequential accumulation
// pass; bounds peak memory at kBatch tile buffers.
constexpr int kBatch = 32;

void tile_to_lab(Tile& tile) {
    kernel::srgb_to_lab(tile.data.data(), tile.data.data(),
                        static_cast<std::int64_t>(tile.size) * tile.size);
    tile.color_space = ColorSpace::Lab;
}

void tile_to_srgb(Tile& tile) {
    kernel::lab_to_srgb(tile.data.data(), tile.data.data(),
                        static_cast<std::int64_t>(tile.size) * tile.size);
    tile.color_space = ColorSpace::SRGB;
}

// Crop -> LAB -> enhance -> sRGB for one grid window.
Tile enhanced_crop(const Image& rgb, const Window& win, int d, Enhancer& enhancer, float gain,
                   std::uint64_t invocation) {
    Tile tile = sample(rgb, win, d);
    tile_to_lab(tile);
    Tile out = enhancer.enhance(tile, gain, invocation);
    if (out.size != tile.size || out.channels != tile.channels) {
        throw ShapeMismatch("enhancer changed the tile shape");
    }
    out.source_window = win;
    tile_to_srgb(out);
    return out;
}

}  // namespace

EnsembleResult averaged_estimate(const Image& img, Enhancer& enhancer, const TileGrid& grid,
                                 WeightKind weights, float gain) {
    img.require_color_space(ColorSpace::SRGB);
    const Image rgb = img.as_rgb();
    if (grid.height != rgb.height || grid.width != rgb.width) {
        throw ShapeMismatch("tile grid was built for a " + std::to_string(grid.height) + "x" +
                            std::to_string(grid.width) + " image, got " +
                            std::to_string(rgb.height) + "x" + std::to_string(rgb.width));
    }
    if (grid.windows.empty()) throw InvalidInput("tile grid is empty");

    const int d = grid.tile_px;
    const std::vector<float> wplane = make_tile_weights(d, weights);
    const std::int64_t npix = rgb.pixels();
    std::vector<double> weighted_sum(3 * npix, 0.0);
    std::vector<double> weight_sum(npix, 0.0);
    Image coverage = Image::make(rgb.height, rgb.width, 1, ColorSpace::SRGB);

    const int ntiles = static_cast<int>(grid.windows.size());
    const bool parallel = enhancer.concurrent_safe();
    std::vector<Tile> batch(std::min(ntiles, kBatch));
    for (int base = 0; base < ntiles; base += kBatch) {
        const int n = std::min(kBatch, ntiles - base);
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        // Wave of independent tile enhancements...
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
        for (int i = 0; i < n; ++i) {
            // After a failure the remaining tiles are skipped: results are
            // discarded anyway, and an external adapter's channel is no
            // longer trustworthy.
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                batch[i] = enhanced_crop(rgb, grid.windows[base + i], d, enhancer, gain,
                                         static_cast<std::uint64_t>(base + i));
            } catch (...) {
                failed.store(true, std::memory_order_relaxed);
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        // ...then accumulation in canonical window order, so sums are
        // bit-identical for any worker count.
        for (int i = 0; i < n; ++i) {
            const auto [x0, y0] = grid.origins[base + i];
            kernel::accumulate_block(batch[i].data.data(), wplane.data(), d, 3, x0, y0, rgb.height,
                                     rgb.width, weighted_sum.data(), weight_sum.data(),
                                     coverage.data.data());
        }
    }

    EnsembleResult out;
    out.estimate = Image::make(rgb.height, rgb.width, 3, ColorSpace::SRGB);
    kernel::normalize_accumulator(weighted_sum.data(), weight_sum.data(), 3, rgb.height, rgb.width,
                                  out.estimate.data.data());
    for (float& v : out.estimate.data) v = detail::clamp01(v);
    out.coverage = std::move(coverage);
    const float min_cov = *std::min_element(out.coverage.data.begin(), out.coverage.data.end());
    if (min_cov < 1.0f) throw Error("internal: tile grid left pixels uncovered");
    return out;
}

Image long_scale_estimate(const Image& img, Enhancer& enhancer, int d, float gain) {
    img.require_color_space(ColorSpace::SRGB);
    const Image rgb = img.as_rgb();
    Tile enhanced = enhanced_crop(rgb, Window::full(), d, enhancer, gain, 0);
    Fragment frag = reconstruct(enhanced, rgb.height, rgb.width);
    return std::move(frag.image);
}

Disagreement crop_disagreement(const Image& img, Enhancer& enhancer, const Window& win_a,
                               const Window& win_b, float gain) {
    img.require_color_space(ColorSpace::SRGB);
    const Image rgb = img.as_rgb();
    win_a.validate();
    win_b.validate();
    if (!win_a.overlaps(win_b)) throw InvalidInput("diagnostic windows do not overlap");

    auto native_of = [&](const Window& win, int* x, int* y, int* d) {
        *d = static_cast<int>(std::lround(win.w * rgb.width));
        if (!win.native_block_of(rgb.width, rgb.height, *d, x, y)) {
            throw InvalidInput("diagnostic windows must be native pixel blocks");
        }
    };
    int ax, ay, da, bx, by, db;
    native_of(win_a, &ax, &ay, &da);
    native_of(win_b, &bx, &by, &db);

    const Tile ta = enhanced_crop(rgb, win_a, da, enhancer, gain, 0);
    const Tile tb = enhanced_crop(rgb, win_b, db, enhancer, gain, 1);

    const int x0 = std::max(ax, bx), x1 = std::min(ax + da, bx + db);
    const int y0 = std::max(ay, by), y1 = std::min(ay + da, by + db);
    if (x0 >= x1 || y0 >= y1) throw InvalidInput("diagnostic windows do not overlap");

    Disagreement out;
    out.x0 = x0;
    out.y0 = y0;
    out.heatmap = Image::make(y1 - y0, x1 - x0, 1, ColorSpace::SRGB);
    double total = 0.0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            double diff = 0.0;
            for (int c = 0; c < 3; ++c) {
                const float va = ta.plane(c)[(y - ay) * da + (x - ax)];
                const float vb = tb.plane(c)[(y - by) * db + (x - bx)];
                diff += std::abs(static_cast<double>(va) - vb);
            }
            diff /= 3.0;
            out.heatmap.at(0, y - y0, x - x0) = static_cast<float>(diff);
            total += diff;
        }
    }
    out.mean = total / out.heatmap.pixels();
    return out;
}

}  // namespace relight
