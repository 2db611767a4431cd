#pragma once

#include <cstddef>
#include <cstdint>

#include "relight/geometry.hpp"

// Data-parallel inner loops. Each kernel has an OpenMP entry point (used
// by the library) and a serial reference twin under kernel::serial with
// identical semantics; the two are compared bit-for-bit in tests and
// timed against each other by the benchmark target.
//
// Every kernel is deterministic for any thread count: outputs depend only
// on inputs, each output element is produced by exactly one iteration,
// and reductions sum fixed-size chunk partials in a fixed order.
namespace relight::kernel {

// sRGB <-> CIELAB (D65) on planar 3-channel buffers of npix samples per
// plane. lab_to_srgb clamps out-of-gamut results to [0,1].
void srgb_to_lab(const float* src, float* dst, std::int64_t npix);
void lab_to_srgb(const float* src, float* dst, std::int64_t npix);

// BT.601 luma plane from planar encoded sRGB.
void bt601_luma(const float* src, float* dst, std::int64_t npix);

// Bilinear resample of the window onto a d x d grid. Border samples
// extrapolate linearly, so affine images resample exactly.
void sample_window(const float* img, int height, int width, int channels,
                   const Window& win, float* out, int d);

// Map a d x d tile back through its window onto an height x width pixel
// grid. support is 1 exactly where a pixel center falls inside win; frag
// is written only at supported pixels.
void reconstruct_window(const float* tile, int d, int channels, const Window& win,
                        float* frag, std::uint8_t* support, int height, int width);

// y = clamp01(x + sqrt(max(x,0))*sigma_shot*e1 + sigma_read*e2) with e1,e2
// i.i.d. standard normal per sample. Streams are derived per
// (channel, row), so results are independent of the worker count.
// Returns the number of clamped samples.
std::size_t add_shot_read_noise(float* data, int channels, int height, int width,
                                double sigma_shot, double sigma_read, std::uint64_t seed);

// Standard normal field, planar, per-(channel,row) streams.
void gaussian_field(float* dst, int channels, int height, int width, std::uint64_t seed);

// Accumulate a d x d tile estimate into weighted-sum / weight-sum /
// coverage buffers at native pixel block (x0, y0). One call per tile, in
// canonical tile order; rows inside a tile are independent.
void accumulate_block(const float* estimate, const float* weights, int d, int channels,
                      int x0, int y0, int height, int width,
                      double* weighted_sum, double* weight_sum, float* coverage);

// out = weighted_sum / weight_sum per pixel and channel.
void normalize_accumulator(const double* weighted_sum, const double* weight_sum,
                           int channels, int height, int width, float* out);

// Edge-clamped box filter of side 2*radius+1 on a single plane. tmp must
// hold height*width floats.
void box_filter(const float* src, float* tmp, float* dst, int height, int width, int radius);

// Mean local SSIM of two luma planes: 11x11 Gaussian window, sigma 1.5,
// K1=0.01, K2=0.03, dynamic range 1, aggregated over the valid region.
double ssim_mean(const float* a, const float* b, int height, int width);

// Mean squared error, accumulated in double over fixed 4096-sample chunks.
double mse(const float* a, const float* b, std::int64_t n);

// out = (1-p)*s + p*l with p a single plane shared by all channels.
// With p in {0,1} this reproduces hard selection bit-exactly.
void blend_planes(const float* short_est, const float* long_est, const float* p_long,
                  float* out, int channels, std::int64_t npix);

// Edge-preserving smoothing of the a/b planes of a planar Lab tile,
// guided by L similarity: rational kernel 1/(1+(dL/sigma_l)^2) over a
// (2*radius+1)^2 clamped neighborhood.
void chroma_smooth(float* lab, int d, int radius, double sigma_l);

namespace serial {
void srgb_to_lab(const float* src, float* dst, std::int64_t npix);
void lab_to_srgb(const float* src, float* dst, std::int64_t npix);
void bt601_luma(const float* src, float* dst, std::int64_t npix);
void sample_window(const float* img, int height, int width, int channels,
                   const Window& win, float* out, int d);
void reconstruct_window(const float* tile, int d, int channels, const Window& win,
                        float* frag, std::uint8_t* support, int height, int width);
std::size_t add_shot_read_noise(float* data, int channels, int height, int width,
                                double sigma_shot, double sigma_read, std::uint64_t seed);
void gaussian_field(float* dst, int channels, int height, int width, std::uint64_t seed);
void accumulate_block(const float* estimate, const float* weights, int d, int channels,
                      int x0, int y0, int height, int width,
                      double* weighted_sum, double* weight_sum, float* coverage);
void normalize_accumulator(const double* weighted_sum, const double* weight_sum,
                           int channels, int height, int width, float* out);
void box_filter(const float* src, float* tmp, float* dst, int height, int width, int radius);
double ssim_mean(const float* a, const float* b, int height, int width);
double mse(const float* a, const float* b, std::int64_t n);
void blend_planes(const float* short_est, const float* long_est, const float* p_long,
                  float* out, int channels, std::int64_t npix);
void chroma_smooth(float* lab, int d, int radius, double sigma_l);
}  // namespace serial

}  // namespace relight::kernel
