#include "relight/geometry.hpp"

#include <cmath>
#include <string>

#include "relight/errors.hpp"

namespace relight {
namespace {

// Forgives double rounding from ratios like px / width.
constexpr double kEps = 1e-9;

bool near_int(double v, int* out) {
    const double r = std::round(v);
    if (std::abs(v - r) > kEps) return false;
    *out = static_cast<int>(r);
    return true;
}

}  // namespace

Window Window::native_block(int px_x, int px_y, int size, int img_w, int img_h) {
    if (size <= 0 || px_x < 0 || px_y < 0 || px_x + size > img_w || px_y + size > img_h) {
        throw InvalidInput("pixel block " + std::to_string(size) + "^2 at (" + std::to_string(px_x) +
                           ", " + std::to_string(px_y) + ") leaves the " + std::to_string(img_w) +
                           "x" + std::to_string(img_h) + " image");
    }
    return {static_cast<double>(px_x) / img_w, static_cast<double>(px_y) / img_h,
            static_cast<double>(size) / img_w, static_cast<double>(size) / img_h};
}

void Window::validate() const {
    if (!(w > 0.0) || !(h > 0.0) || x0 < -kEps || y0 < -kEps || x0 + w > 1.0 + kEps ||
        y0 + h > 1.0 + kEps) {
        throw InvalidInput("window [" + std::to_string(x0) + ", " + std::to_string(x0 + w) + ") x [" +
                           std::to_string(y0) + ", " + std::to_string(y0 + h) +
                           ") leaves the unit viewport");
    }
}

bool Window::native_block_of(int img_w, int img_h, int d, int* px_x, int* px_y) const {
    if (d <= 0) return false;
    int bx, by, bw, bh;
    if (!near_int(x0 * img_w, &bx) || !near_int(y0 * img_h, &by) || !near_int(w * img_w, &bw) ||
        !near_int(h * img_h, &bh)) {
        return false;
    }
    if (bw != d || bh != d || bx < 0 || by < 0 || bx + d > img_w || by + d > img_h) return false;
    *px_x = bx;
    *px_y = by;
    return true;
}

bool Window::overlaps(const Window& o) const {
    return x0 < o.x0 + o.w && o.x0 < x0 + w && y0 < o.y0 + o.h && o.y0 < y0 + h;
}

}  // namespace relight
