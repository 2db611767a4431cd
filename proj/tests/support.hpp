#pragma once

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <utility>

#include "relight/image.hpp"
#include "relight/rng.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 g(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("relight-test-" + std::to_string(g()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = std::move(candidate);
                return;
            }
        }
        std::abort();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

// Smooth, deterministic sRGB test image with full-range content.
inline relight::Image smooth_image(int h, int w, std::uint64_t seed) {
    auto img = relight::Image::make(h, w, 3, relight::ColorSpace::SRGB);
    auto g = relight::rng::stream(seed, 0);
    double fx[3], fy[3], ph[3];
    for (int c = 0; c < 3; ++c) {
        fx[c] = 2.0 + 6.0 * relight::rng::uniform01(g);
        fy[c] = 2.0 + 6.0 * relight::rng::uniform01(g);
        ph[c] = 6.28318530717958648 * relight::rng::uniform01(g);
    }
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double u = static_cast<double>(x) / w, v = static_cast<double>(y) / h;
                const double s = std::sin(fx[c] * u * 6.28318530717958648 + ph[c]) *
                                 std::cos(fy[c] * v * 6.28318530717958648);
                img.at(c, y, x) = static_cast<float>(0.5 + 0.45 * s);
            }
    return img;
}

// Uniform i.i.d. noise in [0,1], full float precision.
inline relight::Image noise_image(int h, int w, int channels, std::uint64_t seed) {
    auto img = relight::Image::make(h, w, channels, relight::ColorSpace::SRGB);
    auto g = relight::rng::stream(seed, 1);
    for (float& v : img.data) v = static_cast<float>(relight::rng::uniform01(g));
    return img;
}

inline relight::Image constant_image(int h, int w, int channels, float value) {
    return relight::Image::make(h, w, channels, relight::ColorSpace::SRGB, value);
}

inline float max_abs_diff(const relight::Image& a, const relight::Image& b) {
    float m = 0.0f;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline bool bit_identical(const relight::Image& a, const relight::Image& b) {
    if (a.data.size() != b.data.size()) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] != b.data[i]) return false;  // NaN-free data by contract
    return true;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs a shell command, capturing stdout (stderr joins it).
inline CommandResult run_command(const std::string& cmd) {
    CommandResult result;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

inline bool files_identical(const std::string& a, const std::string& b) {
    return run_command("cmp -s '" + a + "' '" + b + "'").exit_code == 0;
}

}  // namespace testutil
