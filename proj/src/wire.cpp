#include "relight/wire.hpp"

#include <bit>
#include <cstring>

namespace relight::wire {
namespace {

void put_magic(std::vector<std::uint8_t>& out, const std::uint8_t (&magic)[4]) {
    const std::size_t at = out.size();
    out.resize(at + 4);
    std::memcpy(out.data() + at, magic, 4);
}

void put_samples(std::vector<std::uint8_t>& out, const float* samples, std::size_t count) {
    const std::size_t at = out.size();
    out.resize(at + count * sizeof(float));
    std::memcpy(out.data() + at, samples, count * sizeof(float));  // little-endian host
}

}  // namespace

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

std::vector<std::uint8_t> enh_request(std::uint32_t d, std::uint32_t channels, float gain,
                                      const float* samples) {
    std::vector<std::uint8_t> out;
    out.reserve(kEnhRequestHeader + static_cast<std::size_t>(d) * d * channels * sizeof(float));
    put_magic(out, kEnhMagic);
    put_u32(out, d);
    put_u32(out, channels);
    put_f32(out, gain);
    put_samples(out, samples, static_cast<std::size_t>(d) * d * channels);
    return out;
}

std::vector<std::uint8_t> enh_response(std::uint32_t d, std::uint32_t channels,
                                       const float* samples) {
    std::vector<std::uint8_t> out;
    out.reserve(kEnhResponseHeader + static_cast<std::size_t>(d) * d * channels * sizeof(float));
    put_magic(out, kEnhMagic);
    put_u32(out, d);
    put_u32(out, channels);
    put_samples(out, samples, static_cast<std::size_t>(d) * d * channels);
    return out;
}

std::vector<std::uint8_t> scl_request(std::uint32_t height, std::uint32_t width,
                                      std::uint32_t channels, const float* samples) {
    std::vector<std::uint8_t> out;
    out.reserve(kSclHeader + static_cast<std::size_t>(height) * width * channels * sizeof(float));
    put_magic(out, kSclMagic);
    put_u32(out, height);
    put_u32(out, width);
    put_u32(out, channels);
    put_samples(out, samples, static_cast<std::size_t>(height) * width * channels);
    return out;
}

std::vector<std::uint8_t> scl_response(std::uint32_t height, std::uint32_t width,
                                       const float* samples) {
    std::vector<std::uint8_t> out;
    out.reserve(kSclHeader + static_cast<std::size_t>(height) * width * sizeof(float));
    put_magic(out, kSclMagic);
    put_u32(out, height);
    put_u32(out, width);
    put_u32(out, 1);
    put_samples(out, samples, static_cast<std::size_t>(height) * width);
    return out;
}

}  // namespace relight::wire
