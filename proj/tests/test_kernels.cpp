// The OpenMP kernels and their serial reference twins must agree
// bit-for-bit on every input: each output element is owned by one
// iteration and reductions join fixed chunks in a fixed order.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <vector>

#include "doctest.h"
#include "relight/kernels.hpp"
#include "support.hpp"

using namespace relight;
namespace k = relight::kernel;
namespace ks = relight::kernel::serial;

namespace {

bool same_bits(const std::vector<float>& a, const std::vector<float>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("color conversions match the serial reference") {
    const Image img = testutil::noise_image(73, 41, 3, 11);
    const std::int64_t n = img.pixels();
    std::vector<float> lab_p(3 * n), lab_s(3 * n);
    k::srgb_to_lab(img.data.data(), lab_p.data(), n);
    ks::srgb_to_lab(img.data.data(), lab_s.data(), n);
    CHECK(same_bits(lab_p, lab_s));

    std::vector<float> rgb_p(3 * n), rgb_s(3 * n);
    k::lab_to_srgb(lab_p.data(), rgb_p.data(), n);
    ks::lab_to_srgb(lab_s.data(), rgb_s.data(), n);
    CHECK(same_bits(rgb_p, rgb_s));

    std::vector<float> luma_p(n), luma_s(n);
    k::bt601_luma(img.data.data(), luma_p.data(), n);
    ks::bt601_luma(img.data.data(), luma_s.data(), n);
    CHECK(same_bits(luma_p, luma_s));
}

TEST_CASE("window sampling and reconstruction match the serial reference") {
    const Image img = testutil::smooth_image(97, 123, 5);
    const int d = 48;
    SUBCASE("fractional window") {
        const Window win{0.13, 0.21, 0.61, 0.55};
        std::vector<float> out_p(3 * d * d), out_s(3 * d * d);
        k::sample_window(img.data.data(), img.height, img.width, 3, win, out_p.data(), d);
        ks::sample_window(img.data.data(), img.height, img.width, 3, win, out_s.data(), d);
        CHECK(same_bits(out_p, out_s));

        std::vector<float> frag_p(img.samples(), 0.0f), frag_s = frag_p;
        std::vector<std::uint8_t> sup_p(img.pixels(), 0), sup_s(img.pixels(), 0);
        k::reconstruct_window(out_p.data(), d, 3, win, frag_p.data(), sup_p.data(), img.height,
                              img.width);
        ks::reconstruct_window(out_s.data(), d, 3, win, frag_s.data(), sup_s.data(), img.height,
                               img.width);
        CHECK(same_bits(frag_p, frag_s));
        CHECK(sup_p == sup_s);
    }
    SUBCASE("native block") {
        const Window win = Window::native_block(31, 22, d, img.width, img.height);
        std::vector<float> out_p(3 * d * d), out_s(3 * d * d);
        k::sample_window(img.data.data(), img.height, img.width, 3, win, out_p.data(), d);
        ks::sample_window(img.data.data(), img.height, img.width, 3, win, out_s.data(), d);
        CHECK(same_bits(out_p, out_s));
    }
}

TEST_CASE("seeded noise kernels match the serial reference") {
    Image a = testutil::smooth_image(64, 80, 3);
    Image b = a;
    const std::size_t clamped_p = k::add_shot_read_noise(a.data.data(), 3, 64, 80, 0.05, 0.01, 42);
    const std::size_t clamped_s = ks::add_shot_read_noise(b.data.data(), 3, 64, 80, 0.05, 0.01, 42);
    CHECK(clamped_p == clamped_s);
    CHECK(testutil::bit_identical(a, b));

    std::vector<float> f_p(3 * 55 * 77), f_s(3 * 55 * 77);
    k::gaussian_field(f_p.data(), 3, 55, 77, 9);
    ks::gaussian_field(f_s.data(), 3, 55, 77, 9);
    CHECK(same_bits(f_p, f_s));
}

TEST_CASE("accumulation and normalization match the serial reference") {
    const int h = 60, w = 70, d = 24;
    const Image tile_img = testutil::noise_image(d, d, 3, 7);
    const std::vector<float> weights(static_cast<std::size_t>(d) * d, 0.7f);
    std::vector<double> ws_p(3 * h * w, 0.0), wsum_p(h * w, 0.0);
    std::vector<double> ws_s = ws_p, wsum_s = wsum_p;
    std::vector<float> cov_p(h * w, 0.0f), cov_s(h * w, 0.0f);
    for (const auto& [x0, y0] : {std::pair{0, 0}, {10, 5}, {46, 36}, {20, 20}}) {
        k::accumulate_block(tile_img.data.data(), weights.data(), d, 3, x0, y0, h, w, ws_p.data(),
                            wsum_p.data(), cov_p.data());
        ks::accumulate_block(tile_img.data.data(), weights.data(), d, 3, x0, y0, h, w, ws_s.data(),
                             wsum_s.data(), cov_s.data());
    }
    CHECK(ws_p == ws_s);
    CHECK(wsum_p == wsum_s);
    CHECK(cov_p == cov_s);

    std::vector<float> out_p(3 * h * w, -1.0f), out_s(3 * h * w, -1.0f);
    // Give uncovered pixels nonzero weight so the division is defined.
    for (double& v : wsum_p) v += 1.0;
    for (double& v : wsum_s) v += 1.0;
    k::normalize_accumulator(ws_p.data(), wsum_p.data(), 3, h, w, out_p.data());
    ks::normalize_accumulator(ws_s.data(), wsum_s.data(), 3, h, w, out_s.data());
    CHECK(same_bits(out_p, out_s));
}

TEST_CASE("filters, metrics kernels and blending match the serial reference") {
    const Image a = testutil::noise_image(50, 64, 1, 1);
    const Image b = testutil::noise_image(50, 64, 1, 2);
    const std::int64_t n = a.pixels();

    std::vector<float> tmp(n), dst_p(n), dst_s(n);
    for (const int radius : {0, 1, 3, 8}) {
        k::box_filter(a.data.data(), tmp.data(), dst_p.data(), 50, 64, radius);
        ks::box_filter(a.data.data(), tmp.data(), dst_s.data(), 50, 64, radius);
        CHECK(same_bits(dst_p, dst_s));
    }

    CHECK(k::ssim_mean(a.data.data(), b.data.data(), 50, 64) ==
          ks::ssim_mean(a.data.data(), b.data.data(), 50, 64));
    CHECK(k::mse(a.data.data(), b.data.data(), n) == ks::mse(a.data.data(), b.data.data(), n));

    const Image p = testutil::noise_image(50, 64, 1, 3);
    const Image s3 = testutil::noise_image(50, 64, 3, 4);
    const Image l3 = testutil::noise_image(50, 64, 3, 5);
    std::vector<float> out_p(3 * n), out_s(3 * n);
    k::blend_planes(s3.data.data(), l3.data.data(), p.data.data(), out_p.data(), 3, n);
    ks::blend_planes(s3.data.data(), l3.data.data(), p.data.data(), out_s.data(), 3, n);
    CHECK(same_bits(out_p, out_s));

    const int d = 40;
    Image lab = Image::make(d, d, 3, ColorSpace::Lab);
    auto g = rng::stream(17, 0);
    for (std::int64_t i = 0; i < d * d; ++i) {
        lab.data[i] = static_cast<float>(100.0 * rng::uniform01(g));
        lab.data[d * d + i] = static_cast<float>(60.0 * rng::uniform01(g) - 30.0);
        lab.data[2 * d * d + i] = static_cast<float>(60.0 * rng::uniform01(g) - 30.0);
    }
    Image lab_s = lab;
    k::chroma_smooth(lab.data.data(), d, 2, 10.0);
    ks::chroma_smooth(lab_s.data.data(), d, 2, 10.0);
    CHECK(testutil::bit_identical(lab, lab_s));
}
