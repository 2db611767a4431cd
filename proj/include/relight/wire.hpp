#pragma once

#include <cstdint>
#include <vector>

namespace relight::wire {

// Binary framing shared by the enhancement and scale-prediction
// adapters. Everything is little endian.
//
//   enhance request:   "ENH1" | u32 d | u32 channels | f32 gain | payload
//   enhance response:  "ENH1" | u32 d | u32 channels | payload
//   scale request:     "SCL1" | u32 height | u32 width | u32 channels | payload
//   scale response:    "SCL1" | u32 height | u32 width | u32 1 | payload
//
// Payloads are f32 samples, channel-planar (all of channel 0, then
// channel 1, ...). Enhancement payloads are LAB; scale requests carry
// encoded sRGB and responses carry the per-pixel long-scale probability.
// One response per request, in request order.

inline constexpr std::uint8_t kEnhMagic[4] = {'E', 'N', 'H', '1'};
inline constexpr std::uint8_t kSclMagic[4] = {'S', 'C', 'L', '1'};
inline constexpr std::size_t kEnhRequestHeader = 16;   // magic + d + channels + gain
inline constexpr std::size_t kEnhResponseHeader = 12;  // magic + d + channels
inline constexpr std::size_t kSclHeader = 16;          // magic + h + w + channels

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_f32(std::vector<std::uint8_t>& out, float v);
std::uint32_t get_u32(const std::uint8_t* p);
float get_f32(const std::uint8_t* p);

std::vector<std::uint8_t> enh_request(std::uint32_t d, std::uint32_t channels, float gain,
                                      const float* samples);
std::vector<std::uint8_t> enh_response(std::uint32_t d, std::uint32_t channels,
                                       const float* samples);
std::vector<std::uint8_t> scl_request(std::uint32_t height, std::uint32_t width,
                                      std::uint32_t channels, const float* samples);
std::vector<std::uint8_t> scl_response(std::uint32_t height, std::uint32_t width,
                                       const float* samples);

}  // namespace relight::wire
