#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "relight/ensemble.hpp"
#include "relight/enhancer.hpp"
#include "relight/errors.hpp"
#include "relight/tile_grid.hpp"
#include "support.hpp"

using namespace relight;

namespace {

std::vector<int> axis_positions(const TileGrid& grid, bool x_axis) {
    std::set<int> positions;
    for (const auto& [x, y] : grid.origins) positions.insert(x_axis ? x : y);
    return {positions.begin(), positions.end()};
}

int coverage_at(const TileGrid& grid, int x, int y) {
    int n = 0;
    for (const auto& [ox, oy] : grid.origins)
        if (x >= ox && x < ox + grid.tile_px && y >= oy && y < oy + grid.tile_px) ++n;
    return n;
}

}  // namespace

TEST_CASE("the nominal grid lands on the documented positions") {
    const TileGrid grid = make_tile_grid(400, 600, 256, 0.8, 0, false);
    CHECK(grid.windows.size() == 32);
    CHECK(axis_positions(grid, false) == std::vector<int>{0, 51, 102, 144});
    CHECK(axis_positions(grid, true) == std::vector<int>{0, 51, 102, 153, 204, 255, 306, 344});
    for (const Window& win : grid.windows) CHECK_NOTHROW(win.validate());
    const int c = coverage_at(grid, 300, 200);
    CHECK(c >= 16);
    CHECK(c <= 25);
}

TEST_CASE("jitter keeps the edges pinned and the viewport covered") {
    const TileGrid nominal = make_tile_grid(300, 420, 96, 0.75, 0, false);
    const int stride = 24;  // round(96 * 0.25)
    const int max_jitter = (96 - stride) / 2;
    bool any_moved = false;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const TileGrid grid = make_tile_grid(300, 420, 96, 0.75, seed, true);
        REQUIRE(grid.origins.size() == nominal.origins.size());
        const auto xs = axis_positions(grid, true);
        const auto ys = axis_positions(grid, false);
        CHECK(xs.front() == 0);
        CHECK(xs.back() == 420 - 96);
        CHECK(ys.front() == 0);
        CHECK(ys.back() == 300 - 96);
        for (const Window& win : grid.windows) CHECK_NOTHROW(win.validate());
        for (std::size_t i = 0; i < grid.origins.size(); ++i) {
            CHECK(std::abs(grid.origins[i].first - nominal.origins[i].first) <= max_jitter);
            CHECK(std::abs(grid.origins[i].second - nominal.origins[i].second) <= max_jitter);
            if (grid.origins[i] != nominal.origins[i]) any_moved = true;
        }
        // Every pixel stays covered whatever the draw.
        for (const int y : {0, 1, 95, 149, 299})
            for (const int x : {0, 1, 95, 209, 419}) CHECK(coverage_at(grid, x, y) >= 1);
    }
    CHECK(any_moved);

    const TileGrid a = make_tile_grid(300, 420, 96, 0.75, 5, true);
    const TileGrid b = make_tile_grid(300, 420, 96, 0.75, 5, true);
    CHECK(a.origins == b.origins);
}

TEST_CASE("zero overlap partitions a divisible image") {
    const TileGrid grid = make_tile_grid(192, 256, 64, 0.0, 3, true);
    CHECK(grid.windows.size() == 3 * 4);
    const Image img = testutil::noise_image(192, 256, 3, 4);
    auto identity = make_identity_enhancer();
    const EnsembleResult res = averaged_estimate(img, *identity, grid, WeightKind::Uniform, 1.0f);
    for (const float v : res.coverage.data) CHECK(v == 1.0f);
    CHECK(testutil::max_abs_diff(res.estimate, img) <= 1e-5f);
}

TEST_CASE("grid construction rejects bad parameters") {
    CHECK_THROWS_AS(make_tile_grid(100, 100, 16, 0.5, 0), InvalidInput);   // below minimum size
    CHECK_THROWS_AS(make_tile_grid(100, 100, 128, 0.5, 0), InvalidInput);  // larger than image
    CHECK_THROWS_AS(make_tile_grid(100, 100, 64, 1.0, 0), InvalidInput);
    CHECK_THROWS_AS(make_tile_grid(100, 100, 64, -0.1, 0), InvalidInput);
}

TEST_CASE("tile weights") {
    const auto uniform = make_tile_weights(32, WeightKind::Uniform);
    CHECK(std::all_of(uniform.begin(), uniform.end(), [](float v) { return v == 1.0f; }));
    const auto taper = make_tile_weights(32, WeightKind::Taper);
    CHECK(taper[0] > 0.0f);
    CHECK(taper[0] >= 1e-3f * 1e-3f);  // separable floor
    const float center = taper[16 * 32 + 16];
    CHECK(center > taper[0]);
    CHECK(center <= 1.0f);
    // Symmetry of the separable window.
    for (int i = 0; i < 32; ++i) CHECK(taper[i] == doctest::Approx(taper[31 - i]).epsilon(1e-6));
}

TEST_CASE("identity ensembles close on the input") {
    const Image img = testutil::smooth_image(200, 260, 10);
    auto identity = make_identity_enhancer();
    for (const WeightKind kind : {WeightKind::Uniform, WeightKind::Taper}) {
        const TileGrid grid = make_tile_grid(200, 260, 96, 0.8, 11, true);
        const EnsembleResult res = averaged_estimate(img, *identity, grid, kind, 1.0f);
        CHECK(testutil::max_abs_diff(res.estimate, img) <= 1e-5f);
        for (const float v : res.coverage.data) CHECK(v >= 1.0f);
    }
}

TEST_CASE("a single-window grid equals one whole-image enhancement") {
    const Image img = testutil::smooth_image(128, 128, 12);
    GainGammaParams params;
    auto enh = make_gain_gamma_enhancer(params);
    const TileGrid grid = make_tile_grid(128, 128, 128, 0.5, 0, true);
    REQUIRE(grid.windows.size() == 1);
    const EnsembleResult res = averaged_estimate(img, *enh, grid, WeightKind::Uniform, 2.0f);
    const Image whole = long_scale_estimate(img, *enh, 128, 2.0f);
    CHECK(testutil::bit_identical(res.estimate, whole));
}

TEST_CASE("the long-scale estimate under identity preserves affine images") {
    const int h = 150, w = 200;
    Image img = Image::make(h, w, 3, ColorSpace::SRGB);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                img.at(c, y, x) = static_cast<float>(0.05 + 0.15 * c + 0.3 * x / w + 0.25 * y / h);
    auto identity = make_identity_enhancer();
    const Image out = long_scale_estimate(img, *identity, 64, 1.0f);
    CHECK(testutil::max_abs_diff(out, img) <= 1e-5f);
}

TEST_CASE("worker count does not change ensemble results") {
#ifdef _OPENMP
    const Image img = testutil::smooth_image(220, 300, 13);
    const TileGrid grid = make_tile_grid(220, 300, 96, 0.7, 21, true);
    auto noisy = make_noisy_wrapper(make_gain_gamma_enhancer(), 0.02, 99);
    omp_set_num_threads(1);
    const EnsembleResult serial = averaged_estimate(img, *noisy, grid, WeightKind::Taper, 1.3f);
    omp_set_num_threads(8);
    const EnsembleResult parallel = averaged_estimate(img, *noisy, grid, WeightKind::Taper, 1.3f);
    CHECK(testutil::bit_identical(serial.estimate, parallel.estimate));
    CHECK(testutil::bit_identical(serial.coverage, parallel.coverage));
#endif
}

TEST_CASE("crop disagreement") {
    const Image img = testutil::smooth_image(140, 180, 14);
    const Window a = Window::native_block(10, 20, 64, img.width, img.height);
    const Window b = Window::native_block(42, 44, 64, img.width, img.height);
    SUBCASE("identity crops agree everywhere") {
        auto identity = make_identity_enhancer();
        const Disagreement d = crop_disagreement(img, *identity, a, b, 1.0f);
        CHECK(d.mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
        CHECK(d.x0 == 42);
        CHECK(d.y0 == 44);
        CHECK(d.heatmap.width == 32);
        CHECK(d.heatmap.height == 40);
    }
    SUBCASE("identical windows agree for a deterministic enhancer") {
        auto enh = make_gain_gamma_enhancer();
        const Disagreement d = crop_disagreement(img, *enh, a, a, 2.0f);
        CHECK(d.mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    SUBCASE("enhancement disagrees on the overlap") {
        auto enh = make_gain_gamma_enhancer();
        const Disagreement d = crop_disagreement(img, *enh, a, b, 2.0f);
        CHECK(d.mean > 0.0);
    }
    SUBCASE("disjoint crops are rejected") {
        const Window c = Window::native_block(100, 20, 64, img.width, img.height);
        auto identity = make_identity_enhancer();
        CHECK_THROWS_AS(crop_disagreement(img, *identity, a, c, 1.0f), InvalidInput);
    }
    SUBCASE("fractional windows are rejected") {
        auto identity = make_identity_enhancer();
        CHECK_THROWS_AS(
            crop_disagreement(img, *identity, a, Window{0.3, 0.3, 0.31, 0.31}, 1.0f),
            InvalidInput);
    }
}
