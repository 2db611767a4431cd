#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "relight/detail/pixel_math.hpp"
#include "relight/kernels.hpp"
#include "relight/rng.hpp"

// Kernel bodies, written once and instantiated with either executor.
// Exec::for_n(n, f) runs f(0..n-1) with each index handled exactly once;
// bodies only write locations owned by their index, and anything reduced
// across indices goes through a per-index slot joined serially afterwards.
namespace relight::kernel::detail {

using relight::detail::bilinear_axis;

template <class Exec>
void srgb_to_lab_impl(const float* src, float* dst, std::int64_t npix) {
    const float* r = src;
    const float* g = src + npix;
    const float* b = src + 2 * npix;
    float* L = dst;
    float* A = dst + npix;
    float* B = dst + 2 * npix;
    Exec::for_n(npix, [&](std::int64_t i) {
        double l, a, bb;
        relight::detail::srgb_to_lab(r[i], g[i], b[i], &l, &a, &bb);
        L[i] = static_cast<float>(l);
        A[i] = static_cast<float>(a);
        B[i] = static_cast<float>(bb);
    });
}

template <class Exec>
void lab_to_srgb_impl(const float* src, float* dst, std::int64_t npix) {
    const float* L = src;
    const float* A = src + npix;
    const float* B = src + 2 * npix;
    float* r = dst;
    float* g = dst + npix;
    float* b = dst + 2 * npix;
    Exec::for_n(npix, [&](std::int64_t i) {
        relight::detail::lab_to_srgb(L[i], A[i], B[i], &r[i], &g[i], &b[i]);
    });
}

template <class Exec>
void bt601_luma_impl(const float* src, float* dst, std::int64_t npix) {
    const float* r = src;
    const float* g = src + npix;
    const float* b = src + 2 * npix;
    Exec::for_n(npix, [&](std::int64_t i) {
        dst[i] = static_cast<float>(relight::detail::bt601_luma(r[i], g[i], b[i]));
    });
}

template <class Exec>
void sample_window_impl(const float* img, int height, int width, int channels,
                        const Window& win, float* out, int d) {
    int bx, by;
    if (win.native_block_of(width, height, d, &bx, &by)) {
        // Native pixel block: exact copy, no resampling error.
        Exec::for_n(static_cast<std::int64_t>(channels) * d, [&](std::int64_t r) {
            const int ch = static_cast<int>(r / d);
            const int ty = static_cast<int>(r % d);
            std::memcpy(out + (static_cast<std::int64_t>(ch) * d + ty) * d,
                        img + (static_cast<std::int64_t>(ch) * height + by + ty) * width + bx,
                        sizeof(float) * d);
        });
        return;
    }
    const double ox = win.x0 * width, sx = win.w * width / d;
    const double oy = win.y0 * height, sy = win.h * height / d;
    std::vector<int> xi(d);
    std::vector<double> xf(d);
    for (int i = 0; i < d; ++i) bilinear_axis(ox + (i + 0.5) * sx - 0.5, width, &xi[i], &xf[i]);
    Exec::for_n(d, [&](std::int64_t j) {
        int j0;
        double fy;
        bilinear_axis(oy + (j + 0.5) * sy - 0.5, height, &j0, &fy);
        for (int ch = 0; ch < channels; ++ch) {
            const float* p0 = img + (static_cast<std::int64_t>(ch) * height + j0) * width;
            const float* p1 = p0 + width;
            float* orow = out + (static_cast<std::int64_t>(ch) * d + j) * d;
            for (int i = 0; i < d; ++i) {
                const int k = xi[i];
                const double f = xf[i];
                const double a0 = p0[k] + (p0[k + 1] - p0[k]) * f;
                const double a1 = p1[k] + (p1[k + 1] - p1[k]) * f;
                orow[i] = static_cast<float>(a0 + (a1 - a0) * fy);
            }
        }
    });
}

template <class Exec>
void reconstruct_window_impl(const float* tile, int d, int channels, const Window& win,
                             float* frag, std::uint8_t* support, int height, int width) {
    int bx, by;
    if (win.native_block_of(width, height, d, &bx, &by)) {
        Exec::for_n(d, [&](std::int64_t ty) {
            const std::int64_t row = (by + ty) * static_cast<std::int64_t>(width) + bx;
            std::memset(support + row, 1, d);
            for (int ch = 0; ch < channels; ++ch) {
                std::memcpy(frag + static_cast<std::int64_t>(ch) * height * width + row,
                            tile + (static_cast<std::int64_t>(ch) * d + ty) * d, sizeof(float) * d);
            }
        });
        return;
    }
    // Pixel (x, y) is covered when its center lies inside the window.
    const double x_lo = win.x0 * width, x_hi = (win.x0 + win.w) * width;
    const double y_lo = win.y0 * height, y_hi = (win.y0 + win.h) * height;
    const int x_begin = std::max(0, static_cast<int>(std::ceil(x_lo - 0.5)));
    const int x_end = std::min(width, static_cast<int>(std::ceil(x_hi - 0.5)));
    const int y_begin = std::max(0, static_cast<int>(std::ceil(y_lo - 0.5)));
    const int y_end = std::min(height, static_cast<int>(std::ceil(y_hi - 0.5)));
    if (x_begin >= x_end || y_begin >= y_end) return;
    std::vector<int> xi(x_end - x_begin);
    std::vector<double> xf(x_end - x_begin);
    for (int x = x_begin; x < x_end; ++x) {
        bilinear_axis((x + 0.5 - x_lo) / (x_hi - x_lo) * d - 0.5, d, &xi[x - x_begin], &xf[x - x_begin]);
    }
    Exec::for_n(y_end - y_begin, [&](std::int64_t r) {
        const int y = y_begin + static_cast<int>(r);
        int j0;
        double fy;
        bilinear_axis((y + 0.5 - y_lo) / (y_hi - y_lo) * d - 0.5, d, &j0, &fy);
        std::memset(support + static_cast<std::int64_t>(y) * width + x_begin, 1, x_end - x_begin);
        for (int ch = 0; ch < channels; ++ch) {
            const float* t0 = tile + (static_cast<std::int64_t>(ch) * d + j0) * d;
            const float* t1 = t0 + d;
            float* orow = frag + (static_cast<std::int64_t>(ch) * height + y) * width;
            for (int x = x_begin; x < x_end; ++x) {
                const int k = xi[x - x_begin];
                const double f = xf[x - x_begin];
                const double a0 = t0[k] + (t0[k + 1] - t0[k]) * f;
                const double a1 = t1[k] + (t1[k + 1] - t1[k]) * f;
                orow[x] = static_cast<float>(a0 + (a1 - a0) * fy);
            }
        }
    });
}

template <class Exec>
std::size_t add_shot_read_noise_impl(float* data, int channels, int height, int width,
                                     double sigma_shot, double sigma_read, std::uint64_t seed) {
    const std::int64_t nrows = static_cast<std::int64_t>(channels) * height;
    std::vector<std::size_t> clamped(nrows, 0);
    Exec::for_n(nrows, [&](std::int64_t r) {
        auto g = rng::stream(seed, static_cast<std::uint64_t>(r));
        float* row = data + r * width;
        std::size_t n = 0;
        for (int x = 0; x < width; ++x) {
            const auto [e1, e2] = rng::normal_pair(g);
            const double v = row[x];
            double y = v + std::sqrt(std::max(0.0, v)) * sigma_shot * e1 + sigma_read * e2;
            if (y < 0.0) {
                y = 0.0;
                ++n;
            } else if (y > 1.0) {
                y = 1.0;
                ++n;
            }
            row[x] = static_cast<float>(y);
        }
        clamped[r] = n;
    });
    std::size_t total = 0;
    for (std::size_t n : clamped) total += n;
    return total;
}

template <class Exec>
void gaussian_field_impl(float* dst, int channels, int height, int width, std::uint64_t seed) {
    Exec::for_n(static_cast<std::int64_t>(channels) * height, [&](std::int64_t r) {
        auto g = rng::stream(seed, static_cast<std::uint64_t>(r));
        float* row = dst + r * width;
        int x = 0;
        for (; x + 1 < width; x += 2) {
            const auto [a, b] = rng::normal_pair(g);
            row[x] = static_cast<float>(a);
            row[x + 1] = static_cast<float>(b);
        }
        if (x < width) row[x] = static_cast<float>(rng::normal_pair(g).first);
    });
}

template <class Exec>
void accumulate_block_impl(const float* estimate, const float* weights, int d, int channels,
                           int x0, int y0, int height, int width,
                           double* weighted_sum, double* weight_sum, float* coverage) {
    Exec::for_n(d, [&](std::int64_t ty) {
        const std::int64_t y = y0 + ty;
        const float* wrow = weights + ty * d;
        for (int ch = 0; ch < channels; ++ch) {
            const float* erow = estimate + (static_cast<std::int64_t>(ch) * d + ty) * d;
            double* srow = weighted_sum + (static_cast<std::int64_t>(ch) * height + y) * width + x0;
            for (int tx = 0; tx < d; ++tx) srow[tx] += static_cast<double>(wrow[tx]) * erow[tx];
        }
        double* trow = weight_sum + y * width + x0;
        float* crow = coverage + y * width + x0;
        for (int tx = 0; tx < d; ++tx) {
            trow[tx] += wrow[tx];
            crow[tx] += 1.0f;
        }
    });
}

template <class Exec>
void normalize_accumulator_impl(const double* weighted_sum, const double* weight_sum,
                                int channels, int height, int width, float* out) {
    const std::int64_t npix = static_cast<std::int64_t>(height) * width;
    Exec::for_n(npix, [&](std::int64_t i) {
        const double t = weight_sum[i];
        for (int ch = 0; ch < channels; ++ch) {
            const std::int64_t k = static_cast<std::int64_t>(ch) * npix + i;
            out[k] = t > 0.0 ? static_cast<float>(weighted_sum[k] / t) : 0.0f;
        }
    });
}

template <class Exec>
void box_filter_impl(const float* src, float* tmp, float* dst, int height, int width, int radius) {
    const int n = 2 * radius + 1;
    Exec::for_n(height, [&](std::int64_t y) {
        const float* srow = src + y * width;
        float* trow = tmp + y * width;
        double s = 0.0;
        for (int k = -radius; k <= radius; ++k) s += srow[std::clamp(k, 0, width - 1)];
        trow[0] = static_cast<float>(s / n);
        for (int x = 1; x < width; ++x) {
            s += srow[std::min(width - 1, x + radius)] - srow[std::clamp(x - 1 - radius, 0, width - 1)];
            trow[x] = static_cast<float>(s / n);
        }
    });
    Exec::for_n(height, [&](std::int64_t y) {
        float* drow = dst + y * width;
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                s += tmp[std::clamp(static_cast<int>(y) + k, 0, height - 1) * width + x];
            }
            drow[x] = static_cast<float>(s / n);
        }
    });
}

inline const std::array<double, 11>& ssim_gauss11() {
    static const std::array<double, 11> g = [] {
        std::array<double, 11> w{};
        double s = 0.0;
        for (int k = 0; k < 11; ++k) {
            w[k] = std::exp(-0.5 * (k - 5) * (k - 5) / (1.5 * 1.5));
            s += w[k];
        }
        for (double& v : w) v /= s;
        return w;
    }();
    return g;
}

template <class Exec>
double ssim_mean_impl(const float* a, const float* b, int height, int width) {
    constexpr int kTap = 11;
    const auto& g = ssim_gauss11();
    const int ow = width - (kTap - 1);
    const int oh = height - (kTap - 1);
    if (ow <= 0 || oh <= 0) return std::numeric_limits<double>::quiet_NaN();
    const std::int64_t hn = static_cast<std::int64_t>(height) * ow;
    std::vector<double> ha(hn), hb(hn), haa(hn), hbb(hn), hab(hn);
    Exec::for_n(height, [&](std::int64_t y) {
        const float* ar = a + y * width;
        const float* br = b + y * width;
        for (int x = 0; x < ow; ++x) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int k = 0; k < kTap; ++k) {
                const double av = ar[x + k], bv = br[x + k];
                sa += g[k] * av;
                sb += g[k] * bv;
                saa += g[k] * av * av;
                sbb += g[k] * bv * bv;
                sab += g[k] * av * bv;
            }
            const std::int64_t o = y * ow + x;
            ha[o] = sa;
            hb[o] = sb;
            haa[o] = saa;
            hbb[o] = sbb;
            hab[o] = sab;
        }
    });
    constexpr double kC1 = 0.01 * 0.01;  // (K1 * range)^2, range = 1
    constexpr double kC2 = 0.03 * 0.03;
    std::vector<double> partial(oh, 0.0);
    Exec::for_n(oh, [&](std::int64_t y) {
        double rowsum = 0.0;
        for (int x = 0; x < ow; ++x) {
            double ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
            for (int k = 0; k < kTap; ++k) {
                const std::int64_t o = (y + k) * ow + x;
                ma += g[k] * ha[o];
                mb += g[k] * hb[o];
                maa += g[k] * haa[o];
                mbb += g[k] * hbb[o];
                mab += g[k] * hab[o];
            }
            const double va = maa - ma * ma;
            const double vb = mbb - mb * mb;
            const double cab = mab - ma * mb;
            rowsum += ((2.0 * ma * mb + kC1) * (2.0 * cab + kC2)) /
                      ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
        }
        partial[y] = rowsum;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total / (static_cast<double>(oh) * ow);
}

template <class Exec>
double mse_impl(const float* a, const float* b, std::int64_t n) {
    if (n <= 0) return 0.0;
    constexpr std::int64_t kChunk = 4096;
    const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks);
    Exec::for_n(nchunks, [&](std::int64_t ci) {
        const std::int64_t lo = ci * kChunk;
        const std::int64_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
            const double d = static_cast<double>(a[i]) - b[i];
            s += d * d;
        }
        partial[ci] = s;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total / static_cast<double>(n);
}

template <class Exec>
void blend_planes_impl(const float* short_est, const float* long_est, const float* p_long,
                       float* out, int channels, std::int64_t npix) {
    Exec::for_n(npix, [&](std::int64_t i) {
        const double p = p_long[i];
        for (int ch = 0; ch < channels; ++ch) {
            const std::int64_t k = static_cast<std::int64_t>(ch) * npix + i;
            out[k] = static_cast<float>((1.0 - p) * short_est[k] + p * long_est[k]);
        }
    });
}

template <class Exec>
void chroma_smooth_impl(float* lab, int d, int radius, double sigma_l) {
    if (radius <= 0) return;
    const std::int64_t np = static_cast<std::int64_t>(d) * d;
    const std::vector<float> src(lab + np, lab + 3 * np);  // original a/b planes
    const float* L = lab;
    const float* A = src.data();
    const float* B = src.data() + np;
    Exec::for_n(d, [&](std::int64_t y) {
        for (int x = 0; x < d; ++x) {
            const double lc = L[y * d + x];
            double wsum = 0, asum = 0, bsum = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = std::clamp(static_cast<int>(y) + dy, 0, d - 1);
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = std::clamp(x + dx, 0, d - 1);
                    const double dl = (L[yy * d + xx] - lc) / sigma_l;
                    const double wt = 1.0 / (1.0 + dl * dl);
                    wsum += wt;
                    asum += wt * A[yy * d + xx];
                    bsum += wt * B[yy * d + xx];
                }
            }
            lab[np + y * d + x] = static_cast<float>(asum / wsum);
            lab[2 * np + y * d + x] = static_cast<float>(bsum / wsum);
        }
    });
}

}  // namespace relight::kernel::detail
