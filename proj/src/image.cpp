#include "relight/image.hpp"

#include <string>

namespace relight {

const char* to_string(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::SRGB: return "srgb";
        case ColorSpace::LinearRGB: return "linear-rgb";
        case ColorSpace::Lab: return "lab";
    }
    return "?";
}

Image Image::make(int h, int w, int c, ColorSpace cs, float fill) {
    if (h <= 0 || w <= 0 || c <= 0) {
        throw InvalidInput("image dimensions must be positive, got " + std::to_string(h) + "x" +
                           std::to_string(w) + "x" + std::to_string(c));
    }
    Image img;
    img.height = h;
    img.width = w;
    img.channels = c;
    img.color_space = cs;
    img.data.assign(static_cast<std::size_t>(h) * w * c, fill);
    return img;
}

void Image::require_shape(const Image& o) const {
    if (!same_shape(o)) {
        throw ShapeMismatch("image shapes differ: " + std::to_string(height) + "x" +
                            std::to_string(width) + "x" + std::to_string(channels) + " vs " +
                            std::to_string(o.height) + "x" + std::to_string(o.width) + "x" +
                            std::to_string(o.channels));
    }
}

void Image::require_color_space(ColorSpace cs) const {
    if (color_space != cs) {
        throw InvalidInput(std::string("expected ") + to_string(cs) + " image, got " +
                           to_string(color_space));
    }
}

Image Image::as_rgb() const {
    if (channels == 3) return *this;
    if (channels != 1) {
        throw InvalidInput("cannot widen " + std::to_string(channels) + "-channel image to RGB");
    }
    Image out = make(height, width, 3, color_space);
    for (int c = 0; c < 3; ++c) {
        std::copy(data.begin(), data.end(), out.data.begin() + static_cast<std::size_t>(c) * pixels());
    }
    return out;
}

}  // namespace relight
