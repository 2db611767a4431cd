#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "relight/enhancer.hpp"
#include "relight/errors.hpp"
#include "relight/metrics.hpp"
#include "relight/scale_select.hpp"
#include "relight/sim.hpp"
#include "support.hpp"

using namespace relight;

namespace {

std::string server(const std::string& role) {
    return std::string("exec:") + TOYSERVER_PATH + " " + role;
}

}  // namespace

TEST_CASE("the oracle picks the per-pixel winner") {
    const Image gt = testutil::smooth_image(40, 50, 1);
    SUBCASE("a perfect short estimate wins everywhere") {
        const Image long_est = testutil::noise_image(40, 50, 3, 2);
        const ScaleMap mask = oracle_mask(gt, long_est, gt);
        CHECK(mask.hard);
        for (const float p : mask.p_long) CHECK(p == 0.0f);
    }
    SUBCASE("a perfect long estimate wins everywhere it differs") {
        const Image short_est = testutil::noise_image(40, 50, 3, 3);
        const ScaleMap mask = oracle_mask(short_est, gt, gt);
        for (std::size_t i = 0; i < mask.p_long.size(); ++i) CHECK(mask.p_long[i] == 1.0f);
    }
    SUBCASE("exact ties go to the short scale") {
        const ScaleMap mask = oracle_mask(gt, gt, gt);
        for (const float p : mask.p_long) CHECK(p == 0.0f);
    }
    SUBCASE("the blended oracle estimate dominates both inputs") {
        const Image short_est = add_shot_read_noise(
            [&] { Image lin = gt; lin.color_space = ColorSpace::LinearRGB; return lin; }(), 0.0,
            0.05, 4);
        Image short_srgb = short_est;
        short_srgb.color_space = ColorSpace::SRGB;
        const Image long_est = testutil::smooth_image(40, 50, 9);
        const ScaleMap mask = oracle_mask(short_srgb, long_est, gt);
        const Image blended = blend_hard(short_srgb, long_est, mask);
        CHECK(psnr(blended, gt) >= psnr(short_srgb, gt));
        CHECK(psnr(blended, gt) >= psnr(long_est, gt));
    }
}

TEST_CASE("hard and soft blends agree on hard maps") {
    const Image s = testutil::noise_image(30, 30, 3, 5);
    const Image l = testutil::noise_image(30, 30, 3, 6);
    ScaleMap mask = ScaleMap::make(30, 30, 0.0f, true);
    auto g = rng::stream(8, 0);
    for (float& p : mask.p_long) p = rng::uniform01(g) < 0.5 ? 0.0f : 1.0f;
    const Image hard = blend_hard(s, l, mask);
    const Image soft = blend_soft(s, l, mask);
    CHECK(testutil::bit_identical(hard, soft));
    for (std::size_t i = 0; i < mask.p_long.size(); ++i) {
        const float want = mask.p_long[i] == 1.0f ? l.data[i] : s.data[i];
        CHECK(hard.data[i] == want);
    }
}

TEST_CASE("soft blending is convex per pixel") {
    const Image s = testutil::noise_image(20, 20, 3, 7);
    const Image l = testutil::noise_image(20, 20, 3, 8);
    ScaleMap probs = ScaleMap::make(20, 20, 0.0f, false);
    auto g = rng::stream(9, 0);
    for (float& p : probs.p_long) p = static_cast<float>(rng::uniform01(g));
    const Image out = blend_soft(s, l, probs);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < probs.p_long.size(); ++i) {
            const std::size_t at = c * probs.p_long.size() + i;
            const float lo = std::min(s.data[at], l.data[at]);
            const float hi = std::max(s.data[at], l.data[at]);
            CHECK(out.data[at] >= lo - 1e-7f);
            CHECK(out.data[at] <= hi + 1e-7f);
        }
}

TEST_CASE("scale maps validate and round trip through images") {
    ScaleMap map = ScaleMap::make(6, 7, 0.25f, false);
    map.validate();
    const ScaleMap back = ScaleMap::from_image(map.to_image());
    CHECK(back.height == 6);
    CHECK(back.width == 7);
    CHECK_FALSE(back.hard);
    CHECK(back.p_long == map.p_long);

    const ScaleMap hard_back = ScaleMap::from_image(ScaleMap::make(3, 3, 1.0f, true).to_image());
    CHECK(hard_back.hard);

    ScaleMap bad = ScaleMap::make(3, 3, 0.5f, false);
    bad.p_long[4] = 1.5f;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK_THROWS_AS(ScaleMap::make(3, 3, 0.5f, true), InvalidInput);  // not a hard value
    ScaleMap claims_hard;  // hand-built inconsistent map
    claims_hard.height = claims_hard.width = 3;
    claims_hard.p_long.assign(9, 0.5f);
    claims_hard.hard = true;
    CHECK_THROWS_AS(claims_hard.validate(), InvalidInput);

    const Image s = testutil::noise_image(4, 4, 3, 10);
    const Image l = testutil::noise_image(4, 4, 3, 11);
    const ScaleMap small = ScaleMap::make(3, 3, 0.0f, true);
    CHECK_THROWS_AS(blend_hard(s, l, small), ShapeMismatch);
    const ScaleMap soft_map = ScaleMap::make(4, 4, 0.5f, false);
    CHECK_THROWS_AS(blend_hard(s, l, soft_map), InvalidInput);
}

TEST_CASE("the luminance heuristic flags dark regions as long-scale") {
    Image img = testutil::constant_image(24, 24, 3, 0.8f);
    for (int y = 8; y < 16; ++y)
        for (int x = 8; x < 16; ++x)
            for (int c = 0; c < 3; ++c) img.at(c, y, x) = 0.02f;
    SUBCASE("pointwise") {
        const ScaleMap map = luminance_scale_predictor(img, 0, 0.35);
        CHECK(map.hard);
        CHECK(map.p_long[12 * 24 + 12] == 1.0f);
        CHECK(map.p_long[2 * 24 + 2] == 0.0f);
    }
    SUBCASE("box filtering erodes isolated dark pixels") {
        Image spot = testutil::constant_image(24, 24, 3, 0.8f);
        for (int c = 0; c < 3; ++c) spot.at(c, 12, 12) = 0.0f;
        const ScaleMap pointwise = luminance_scale_predictor(spot, 0, 0.35);
        CHECK(pointwise.p_long[12 * 24 + 12] == 1.0f);
        const ScaleMap smoothed = luminance_scale_predictor(spot, 3, 0.35);
        CHECK(smoothed.p_long[12 * 24 + 12] == 0.0f);
    }
}

TEST_CASE("predictor specs parse strictly") {
    CHECK_NOTHROW(make_predictor("const:0.5"));
    CHECK_NOTHROW(make_predictor("luma:2,0.3"));
    CHECK_THROWS_AS(make_predictor("const:1.5"), InvalidInput);
    CHECK_THROWS_AS(make_predictor("const:abc"), InvalidInput);
    CHECK_THROWS_AS(make_predictor("luma:2"), InvalidInput);
    CHECK_THROWS_AS(make_predictor("luma:-1,0.3"), InvalidInput);
    CHECK_THROWS_AS(make_predictor("magic"), InvalidInput);
    CHECK_THROWS_AS(make_predictor("exec:"), InvalidInput);
}

TEST_CASE("external predictors match their local twins") {
    const Image dark = testutil::smooth_image(40, 36, 12);
    SUBCASE("constant") {
        auto local = make_constant_predictor(0.25f);
        auto remote = make_predictor(server("scl-const:0.25"));
        const ScaleMap a = local->predict(dark);
        const ScaleMap b = remote->predict(dark);
        CHECK(a.p_long == b.p_long);
    }
    SUBCASE("pointwise luminance") {
        auto local = make_luminance_predictor(0, 0.35);
        auto remote = make_predictor(server("scl-luma"));
        const ScaleMap a = local->predict(dark);
        const ScaleMap b = remote->predict(dark);
        CHECK(a.p_long == b.p_long);
    }
    SUBCASE("shape mismatch is detected") {
        auto remote = make_predictor(server("scl-badshape"));
        CHECK_THROWS_AS(remote->predict(dark), ShapeMismatch);
    }
}

TEST_CASE("the full pipeline blends by mode") {
    const Image dark = testutil::smooth_image(96, 120, 13);
    auto identity = make_identity_enhancer();
    const TileGrid grid = make_tile_grid(96, 120, 48, 0.6, 1, true);

    SUBCASE("an all-long constant map reproduces the long estimate") {
        auto ones = make_constant_predictor(1.0f);
        const EnsembleEstimate est = ensemble_estimate(dark, *identity, grid, WeightKind::Uniform,
                                                       1.0f, 48, ones.get(), BlendMode::Hard);
        CHECK(testutil::bit_identical(est.final, est.long_est));
        CHECK(est.map.hard);
    }
    SUBCASE("an all-short constant map reproduces the short estimate") {
        auto zeros = make_constant_predictor(0.0f);
        const EnsembleEstimate est = ensemble_estimate(dark, *identity, grid, WeightKind::Uniform,
                                                       1.0f, 48, zeros.get(), BlendMode::Hard);
        CHECK(testutil::bit_identical(est.final, est.short_est));
    }
    SUBCASE("hard mode thresholds a soft map at one half") {
        auto soft = make_constant_predictor(0.6f);
        const EnsembleEstimate est = ensemble_estimate(dark, *identity, grid, WeightKind::Uniform,
                                                       1.0f, 48, soft.get(), BlendMode::Hard);
        CHECK(est.map.hard);
        for (const float p : est.map.p_long) CHECK(p == 1.0f);
    }
    SUBCASE("the oracle path needs ground truth") {
        CHECK_THROWS_AS(ensemble_estimate(dark, *identity, grid, WeightKind::Uniform, 1.0f, 48,
                                          nullptr, BlendMode::Hard, nullptr),
                        InvalidInput);
    }
    SUBCASE("dumped pieces recombine bit-exactly") {
        auto luma = make_luminance_predictor(2, 0.5);
        const EnsembleEstimate est = ensemble_estimate(dark, *identity, grid, WeightKind::Taper,
                                                       1.0f, 48, luma.get(), BlendMode::Soft);
        const Image again = blend_soft(est.short_est, est.long_est, est.map);
        CHECK(testutil::bit_identical(again, est.final));
    }
}
