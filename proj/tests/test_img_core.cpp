#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "relight/color.hpp"
#include "relight/detail/pixel_math.hpp"
#include "relight/errors.hpp"
#include "relight/geometry.hpp"
#include "relight/png_io.hpp"
#include "relight/sampling.hpp"
#include "support.hpp"

using namespace relight;

TEST_CASE("sRGB transfer curve hits reference values") {
    CHECK(detail::srgb_oetf(0.01) == doctest::Approx(0.09985282).epsilon(1e-6));
    CHECK(detail::srgb_eotf(detail::srgb_oetf(0.37)) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(detail::srgb_oetf(0.0) == 0.0);
    CHECK(detail::srgb_oetf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Continuity at the linear/power splice.
    CHECK(detail::srgb_eotf(0.04045) == doctest::Approx(0.04045 / 12.92).epsilon(1e-4));
}

TEST_CASE("CIELAB conversion hits reference values") {
    Image gray = testutil::constant_image(4, 4, 3, 0.5f);
    const Image lab = rgb_to_lab(gray);
    CHECK(lab.at(0, 0, 0) == doctest::Approx(53.38897).epsilon(1e-5));
    CHECK(std::abs(lab.at(1, 0, 0)) < 1e-4);
    CHECK(std::abs(lab.at(2, 0, 0)) < 1e-4);

    const Image white_lab = rgb_to_lab(testutil::constant_image(2, 2, 3, 1.0f));
    CHECK(white_lab.at(0, 0, 0) == doctest::Approx(100.0).epsilon(1e-5));
    const Image black_lab = rgb_to_lab(testutil::constant_image(2, 2, 3, 0.0f));
    CHECK(black_lab.at(0, 0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));

    SUBCASE("round trip") {
        const Image img = testutil::noise_image(32, 32, 3, 21);
        const Image back = lab_to_rgb(rgb_to_lab(img));
        CHECK(testutil::max_abs_diff(img, back) <= 1e-3f);
    }
    SUBCASE("color space is checked") {
        Image linear = Image::make(2, 2, 3, ColorSpace::LinearRGB, 0.5f);
        CHECK_THROWS_AS(rgb_to_lab(linear), InvalidInput);
    }
}

TEST_CASE("windows validate and map to native blocks") {
    CHECK_THROWS_AS(Window::native_block(100, 0, 64, 128, 128), InvalidInput);
    CHECK_NOTHROW(Window::native_block(64, 64, 64, 128, 128));
    const Window win = Window::native_block(31, 17, 48, 200, 100);
    int px = -1, py = -1;
    CHECK(win.native_block_of(200, 100, 48, &px, &py));
    CHECK(px == 31);
    CHECK(py == 17);
    CHECK_FALSE(win.native_block_of(200, 100, 32, &px, &py));

    Window bad{0.5, 0.5, 0.6, 0.3};  // leaves the viewport
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    Window degenerate{0.1, 0.1, 0.0, 0.5};
    CHECK_THROWS_AS(degenerate.validate(), InvalidInput);
}

TEST_CASE("native block crops are bit-exact") {
    const Image img = testutil::noise_image(90, 130, 3, 33);
    const int d = 48, x0 = 23, y0 = 41;
    const Tile tile = sample(img, Window::native_block(x0, y0, d, img.width, img.height), d);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < d; ++y)
            for (int x = 0; x < d; ++x)
                CHECK(tile.data[(c * d + y) * d + x] == img.at(c, y0 + y, x0 + x));
}

TEST_CASE("affine images resample exactly") {
    const int h = 64, w = 96;
    Image img = Image::make(h, w, 3, ColorSpace::SRGB);
    const double coef[3][3] = {{0.2, 0.3, 0.1}, {0.5, -0.2, 0.25}, {0.1, 0.15, 0.4}};
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                img.at(c, y, x) = static_cast<float>(
                    coef[c][0] + coef[c][1] * x / (w - 1.0) + coef[c][2] * y / (h - 1.0));

    const Window win{0.05, 0.1, 0.9, 0.8};
    const int d = 50;
    const Tile tile = sample(img, win, d);
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                const double px = win.x0 * w + (i + 0.5) * win.w * w / d - 0.5;
                const double py = win.y0 * h + (j + 0.5) * win.h * h / d - 0.5;
                const double expect =
                    coef[c][0] + coef[c][1] * px / (w - 1.0) + coef[c][2] * py / (h - 1.0);
                CHECK(tile.data[(c * d + j) * d + i] == doctest::Approx(expect).epsilon(2e-6));
            }
}

TEST_CASE("fractional sampling matches a brute-force bilinear oracle") {
    const Image img = testutil::noise_image(47, 61, 3, 55);
    const Window win{0.07, 0.12, 0.8, 0.77};
    const int d = 37;
    const Tile tile = sample(img, win, d);
    auto oracle = [&](int c, double px, double py) {
        int x0 = static_cast<int>(std::floor(px));
        int y0 = static_cast<int>(std::floor(py));
        x0 = std::max(0, std::min(x0, img.width - 2));
        y0 = std::max(0, std::min(y0, img.height - 2));
        const double fx = px - x0, fy = py - y0;
        const double a00 = img.at(c, y0, x0), a01 = img.at(c, y0, x0 + 1);
        const double a10 = img.at(c, y0 + 1, x0), a11 = img.at(c, y0 + 1, x0 + 1);
        const double top = a00 + (a01 - a00) * fx;
        const double bottom = a10 + (a11 - a10) * fx;
        return top + (bottom - top) * fy;
    };
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                const double px = win.x0 * img.width + (i + 0.5) * win.w * img.width / d - 0.5;
                const double py = win.y0 * img.height + (j + 0.5) * win.h * img.height / d - 0.5;
                CHECK(tile.data[(c * d + j) * d + i] ==
                      doctest::Approx(oracle(c, px, py)).epsilon(1e-5));
            }
}

TEST_CASE("reconstruction writes exactly the covered pixels") {
    const Image img = testutil::noise_image(70, 90, 3, 66);
    const int d = 40, x0 = 12, y0 = 25;
    const Window win = Window::native_block(x0, y0, d, img.width, img.height);
    const Tile tile = sample(img, win, d);
    const Fragment frag = reconstruct(tile, img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const bool inside = x >= x0 && x < x0 + d && y >= y0 && y < y0 + d;
            CHECK(frag.support[static_cast<std::size_t>(y) * img.width + x] == (inside ? 1 : 0));
            if (inside)
                for (int c = 0; c < 3; ++c) CHECK(frag.image.at(c, y, x) == img.at(c, y, x));
        }
}

TEST_CASE("whole-image window round trip is bit-exact") {
    const Image img = testutil::noise_image(52, 52, 3, 77);
    const Tile tile = sample(img, Window::full(), 52);
    const Fragment frag = reconstruct(tile, 52, 52);
    CHECK(testutil::bit_identical(frag.image, img));
}

TEST_CASE("PNG files round trip") {
    testutil::TempDir tmp;
    SUBCASE("8-bit") {
        Image img = testutil::noise_image(23, 31, 3, 88);
        for (float& v : img.data) v = std::round(v * 255.0f) / 255.0f;
        write_png(tmp.file("a.png"), img, 8);
        const Image back = read_png(tmp.file("a.png"));
        CHECK(testutil::max_abs_diff(img, back) <= 1e-6f);
    }
    SUBCASE("16-bit") {
        Image img = testutil::noise_image(16, 16, 3, 89);
        for (float& v : img.data) v = std::round(v * 65535.0f) / 65535.0f;
        write_png(tmp.file("b.png"), img, 16);
        const Image back = read_png(tmp.file("b.png"));
        CHECK(testutil::max_abs_diff(img, back) <= 1e-7f);
    }
    SUBCASE("grayscale stays single-channel") {
        Image img = testutil::noise_image(9, 11, 1, 90);
        for (float& v : img.data) v = std::round(v * 255.0f) / 255.0f;
        write_png(tmp.file("g.png"), img, 8);
        const Image back = read_png(tmp.file("g.png"));
        CHECK(back.channels == 1);
        CHECK(testutil::max_abs_diff(img, back) <= 1e-6f);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(read_png(tmp.file("missing.png")), IoError);
        Image lab = Image::make(4, 4, 3, ColorSpace::Lab, 1.0f);
        CHECK_THROWS_AS(write_png(tmp.file("lab.png"), lab), InvalidInput);
        Image img = testutil::noise_image(4, 4, 3, 91);
        CHECK_THROWS_AS(write_png(tmp.file("c.png"), img, 12), InvalidInput);
        CHECK_THROWS_AS(write_image(tmp.file("d.bmp"), img), IoError);
    }
}

TEST_CASE("raw float files round trip bit-exactly") {
    testutil::TempDir tmp;
    const Image img = testutil::noise_image(19, 27, 3, 92);
    write_rawf32(tmp.file("a.rawf32"), img);
    const Image back = read_rawf32(tmp.file("a.rawf32"));
    CHECK(back.height == img.height);
    CHECK(back.width == img.width);
    CHECK(back.channels == img.channels);
    CHECK(testutil::bit_identical(img, back));
    CHECK_THROWS_AS(read_rawf32(tmp.file("missing.rawf32")), IoError);
}

TEST_CASE("image shape helpers") {
    CHECK_THROWS_AS(Image::make(0, 4, 3, ColorSpace::SRGB), InvalidInput);
    const Image a = testutil::noise_image(4, 5, 3, 93);
    const Image b = testutil::noise_image(4, 6, 3, 94);
    CHECK_THROWS_AS(a.require_shape(b), ShapeMismatch);
    const Image gray = testutil::noise_image(4, 5, 1, 95);
    const Image rgb = gray.as_rgb();
    CHECK(rgb.channels == 3);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x)
            for (int c = 0; c < 3; ++c) CHECK(rgb.at(c, y, x) == gray.at(0, y, x));
}
