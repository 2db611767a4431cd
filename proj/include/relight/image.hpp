#pragma once

#include <cstdint>
#include <vector>

#include "relight/errors.hpp"

namespace relight {

enum class ColorSpace { SRGB, LinearRGB, Lab };

const char* to_string(ColorSpace cs);

// Planar float raster: data[(c*height + y)*width + x]. SRGB/LinearRGB
// samples live in [0,1] after any public operation; Lab carries L in
// [0,100] and a,b in roughly [-128,127].
struct Image {
    int height = 0;
    int width = 0;
    int channels = 0;
    ColorSpace color_space = ColorSpace::SRGB;
    std::vector<float> data;

    static Image make(int h, int w, int c, ColorSpace cs, float fill = 0.0f);

    std::int64_t pixels() const { return static_cast<std::int64_t>(height) * width; }
    std::int64_t samples() const { return pixels() * channels; }

    float* plane(int c) { return data.data() + c * pixels(); }
    const float* plane(int c) const { return data.data() + c * pixels(); }

    float& at(int c, int y, int x) {
        return data[(static_cast<std::int64_t>(c) * height + y) * width + x];
    }
    float at(int c, int y, int x) const {
        return data[(static_cast<std::int64_t>(c) * height + y) * width + x];
    }

    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }

    void require_shape(const Image& o) const;
    void require_color_space(ColorSpace cs) const;

    // Grayscale image replicated to three channels; 3-channel images pass
    // through unchanged.
    Image as_rgb() const;
};

}  // namespace relight
