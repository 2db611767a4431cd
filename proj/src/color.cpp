#include "relight/color.hpp"

#include "relight/kernels.hpp"

namespace relight {

Image rgb_to_lab(const Image& img) {
    img.require_color_space(ColorSpace::SRGB);
    if (img.channels != 3) throw InvalidInput("LAB conversion needs a 3-channel image");
    Image out = Image::make(img.height, img.width, 3, ColorSpace::Lab);
    kernel::srgb_to_lab(img.data.data(), out.data.data(), img.pixels());
    return out;
}

Image lab_to_rgb(const Image& img) {
    img.require_color_space(ColorSpace::Lab);
    if (img.channels != 3) throw InvalidInput("LAB conversion needs a 3-channel image");
    Image out = Image::make(img.height, img.width, 3, ColorSpace::SRGB);
    kernel::lab_to_srgb(img.data.data(), out.data.data(), img.pixels());
    return out;
}

}  // namespace relight
