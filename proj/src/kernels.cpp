#include "relight/kernels.hpp"

#include "kernel_impl.hpp"

namespace relight::kernel {
namespace {

struct OmpExec {
    template <class F>
    static void for_n(std::int64_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t i = 0; i < n; ++i) f(i);
    }
};

}  // namespace

void srgb_to_lab(const float* src, float* dst, std::int64_t npix) {
    detail::srgb_to_lab_impl<OmpExec>(src, dst, npix);
}

void lab_to_srgb(const float* src, float* dst, std::int64_t npix) {
    detail::lab_to_srgb_impl<OmpExec>(src, dst, npix);
}

void bt601_luma(const float* src, float* dst, std::int64_t npix) {
    detail::bt601_luma_impl<OmpExec>(src, dst, npix);
}

void sample_window(const float* img, int height, int width, int channels,
                   const Window& win, float* out, int d) {
    detail::sample_window_impl<OmpExec>(img, height, width, channels, win, out, d);
}

void reconstruct_window(const float* tile, int d, int channels, const Window& win,
                        float* frag, std::uint8_t* support, int height, int width) {
    detail::reconstruct_window_impl<OmpExec>(tile, d, channels, win, frag, support, height, width);
}

std::size_t add_shot_read_noise(float* data, int channels, int height, int width,
                                double sigma_shot, double sigma_read, std::uint64_t seed) {
    return detail::add_shot_read_noise_impl<OmpExec>(data, channels, height, width,
                                                     sigma_shot, sigma_read, seed);
}

void gaussian_field(float* dst, int channels, int height, int width, std::uint64_t seed) {
    detail::gaussian_field_impl<OmpExec>(dst, channels, height, width, seed);
}

void accumulate_block(const float* estimate, const float* weights, int d, int channels,
                      int x0, int y0, int height, int width,
                      double* weighted_sum, double* weight_sum, float* coverage) {
    detail::accumulate_block_impl<OmpExec>(estimate, weights, d, channels, x0, y0, height, width,
                                           weighted_sum, weight_sum, coverage);
}

void normalize_accumulator(const double* weighted_sum, const double* weight_sum,
                           int channels, int height, int width, float* out) {
    detail::normalize_accumulator_impl<OmpExec>(weighted_sum, weight_sum, channels, height, width, out);
}

void box_filter(const float* src, float* tmp, float* dst, int height, int width, int radius) {
    detail::box_filter_impl<OmpExec>(src, tmp, dst, height, width, radius);
}

double ssim_mean(const float* a, const float* b, int height, int width) {
    return detail::ssim_mean_impl<OmpExec>(a, b, height, width);
}

double mse(const float* a, const float* b, std::int64_t n) {
    return detail::mse_impl<OmpExec>(a, b, n);
}

void blend_planes(const float* short_est, const float* long_est, const float* p_long,
                  float* out, int channels, std::int64_t npix) {
    detail::blend_planes_impl<OmpExec>(short_est, long_est, p_long, out, channels, npix);
}

void chroma_smooth(float* lab, int d, int radius, double sigma_l) {
    detail::chroma_smooth_impl<OmpExec>(lab, d, radius, sigma_l);
}

}  // namespace relight::kernel
