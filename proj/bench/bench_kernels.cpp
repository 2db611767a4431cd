// Parallel kernels against their serial reference twins, plus the two
// full-pipeline paths that dominate wall time. Run with
// --benchmark_filter=... to narrow.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "relight/ensemble.hpp"
#include "relight/enhancer.hpp"
#include "relight/kernels.hpp"
#include "relight/rng.hpp"
#include "relight/tile_grid.hpp"

using namespace relight;

namespace {

std::vector<float> uniform_block(std::size_t n, std::uint64_t seed) {
    std::vector<float> v(n);
    auto g = rng::stream(seed, 0);
    for (float& x : v) x = static_cast<float>(rng::uniform01(g));
    return v;
}

using ColorFn = void (*)(const float*, float*, std::int64_t);

void bm_color(benchmark::State& state, ColorFn fn) {
    const std::int64_t npix = state.range(0);
    const auto src = uniform_block(static_cast<std::size_t>(3 * npix), 1);
    std::vector<float> dst(src.size());
    for (auto _ : state) {
        fn(src.data(), dst.data(), npix);
        benchmark::DoNotOptimize(dst.data());
    }
    state.SetItemsProcessed(state.iterations() * npix);
}

void bm_box_filter(benchmark::State& state,
                   void (*fn)(const float*, float*, float*, int, int, int)) {
    const int side = static_cast<int>(state.range(0));
    const auto src = uniform_block(static_cast<std::size_t>(side) * side, 2);
    std::vector<float> tmp(src.size()), dst(src.size());
    for (auto _ : state) {
        fn(src.data(), tmp.data(), dst.data(), side, side, 4);
        benchmark::DoNotOptimize(dst.data());
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}

void bm_mse(benchmark::State& state, double (*fn)(const float*, const float*, std::int64_t)) {
    const std::int64_t n = state.range(0);
    const auto a = uniform_block(static_cast<std::size_t>(n), 3);
    const auto b = uniform_block(static_cast<std::size_t>(n), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fn(a.data(), b.data(), n));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bm_gaussian_field(benchmark::State& state,
                       void (*fn)(float*, int, int, int, std::uint64_t)) {
    const int side = static_cast<int>(state.range(0));
    std::vector<float> dst(static_cast<std::size_t>(3) * side * side);
    for (auto _ : state) {
        fn(dst.data(), 3, side, side, 17);
        benchmark::DoNotOptimize(dst.data());
    }
    state.SetItemsProcessed(state.iterations() * 3 * side * side);
}

void bm_ssim(benchmark::State& state, double (*fn)(const float*, const float*, int, int)) {
    const int side = static_cast<int>(state.range(0));
    const auto a = uniform_block(static_cast<std::size_t>(side) * side, 5);
    const auto b = uniform_block(static_cast<std::size_t>(side) * side, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fn(a.data(), b.data(), side, side));
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}

// The dominant end-to-end path: identity ensemble over a 400x600 image.
void bm_identity_ensemble(benchmark::State& state) {
    Image img = Image::make(400, 600, 3, ColorSpace::SRGB);
    auto fill = uniform_block(img.data.size(), 7);
    img.data = std::move(fill);
    const TileGrid grid = make_tile_grid(400, 600, 256, 0.8, 11, true);
    auto identity = make_identity_enhancer();
    for (auto _ : state) {
        const EnsembleResult res =
            averaged_estimate(img, *identity, grid, WeightKind::Taper, 1.0f);
        benchmark::DoNotOptimize(res.estimate.data.data());
    }
}

void bm_gain_gamma_ensemble(benchmark::State& state) {
    Image img = Image::make(400, 600, 3, ColorSpace::SRGB);
    auto fill = uniform_block(img.data.size(), 8);
    for (float& v : fill) v *= 0.1f;
    img.data = std::move(fill);
    const TileGrid grid = make_tile_grid(400, 600, 256, 0.8, 11, true);
    auto enhancer = make_gain_gamma_enhancer();
    for (auto _ : state) {
        const EnsembleResult res =
            averaged_estimate(img, *enhancer, grid, WeightKind::Taper, 8.0f);
        benchmark::DoNotOptimize(res.estimate.data.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_color, srgb_to_lab_omp, &kernel::srgb_to_lab)->Arg(1 << 18);
BENCHMARK_CAPTURE(bm_color, srgb_to_lab_serial, &kernel::serial::srgb_to_lab)->Arg(1 << 18);
BENCHMARK_CAPTURE(bm_color, lab_to_srgb_omp, &kernel::lab_to_srgb)->Arg(1 << 18);
BENCHMARK_CAPTURE(bm_color, lab_to_srgb_serial, &kernel::serial::lab_to_srgb)->Arg(1 << 18);
BENCHMARK_CAPTURE(bm_box_filter, omp, &kernel::box_filter)->Arg(512);
BENCHMARK_CAPTURE(bm_box_filter, serial, &kernel::serial::box_filter)->Arg(512);
BENCHMARK_CAPTURE(bm_mse, omp, &kernel::mse)->Arg(1 << 20);
BENCHMARK_CAPTURE(bm_mse, serial, &kernel::serial::mse)->Arg(1 << 20);
BENCHMARK_CAPTURE(bm_gaussian_field, omp, &kernel::gaussian_field)->Arg(512);
BENCHMARK_CAPTURE(bm_gaussian_field, serial, &kernel::serial::gaussian_field)->Arg(512);
BENCHMARK_CAPTURE(bm_ssim, omp, &kernel::ssim_mean)->Arg(512);
BENCHMARK_CAPTURE(bm_ssim, serial, &kernel::serial::ssim_mean)->Arg(512);
BENCHMARK(bm_identity_ensemble)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gain_gamma_ensemble)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
