#pragma once

#include <algorithm>
#include <cmath>

// Scalar per-pixel math shared by the OpenMP kernels and their serial
// reference twins. Everything here is computed in double and stored to
// float by the callers.
namespace relight::detail {

inline float clamp01(float v) { return std::min(1.0f, std::max(0.0f, v)); }

// Standard sRGB transfer function (IEC 61966-2-1).
inline double srgb_eotf(double s) {
    return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
}

inline double srgb_oetf(double l) {
    return l <= 0.0031308 ? l * 12.92 : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

// D65 white point.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

inline double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    constexpr double d3 = d * d * d;
    return t > d3 ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

inline double lab_finv(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d ? t * t * t : 3.0 * d * d * (t - 4.0 / 29.0);
}

inline void linear_rgb_to_xyz(double r, double g, double b, double* x, double* y, double* z) {
    *x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    *y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    *z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
}

inline void xyz_to_linear_rgb(double x, double y, double z, double* r, double* g, double* b) {
    *r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    *g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    *b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
}

inline void srgb_to_lab(double r, double g, double b, double* L, double* a, double* bb) {
    double x, y, z;
    linear_rgb_to_xyz(srgb_eotf(r), srgb_eotf(g), srgb_eotf(b), &x, &y, &z);
    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);
    *L = 116.0 * fy - 16.0;
    *a = 500.0 * (fx - fy);
    *bb = 200.0 * (fy - fz);
}

// Out-of-gamut results are clamped to [0,1].
inline void lab_to_srgb(double L, double a, double b, float* r, float* g, float* bb) {
    const double fy = (L + 16.0) / 116.0;
    const double fx = fy + a / 500.0;
    const double fz = fy - b / 200.0;
    double rl, gl, bl;
    xyz_to_linear_rgb(kXn * lab_finv(fx), kYn * lab_finv(fy), kZn * lab_finv(fz), &rl, &gl, &bl);
    *r = clamp01(static_cast<float>(srgb_oetf(rl)));
    *g = clamp01(static_cast<float>(srgb_oetf(gl)));
    *bb = clamp01(static_cast<float>(srgb_oetf(bl)));
}

// ITU-R BT.601 luma of encoded sRGB values.
inline double bt601_luma(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

// 1-D bilinear weight lookup with linear extrapolation at the borders,
// so affine signals are reproduced exactly everywhere. p is a sample
// coordinate (0 .. n-1), n >= 2.
inline void bilinear_axis(double p, int n, int* i0, double* frac) {
    int i = static_cast<int>(std::floor(p));
    i = std::max(0, std::min(n - 2, i));
    *i0 = i;
    *frac = p - i;
}

}  // namespace relight::detail
