#include "snowroad/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace snowroad {

HsvPixel rgb_to_hsv_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const int v = std::max({r, g, b});
    const int c = v - std::min({r, g, b});

    HsvPixel out;
    out.v = static_cast<std::uint8_t>(v);
    if (v == 0) return out;
    out.s = static_cast<std::uint8_t>(std::floor(255.0 * c / v + 0.5));
    if (c == 0) return out;

    double h;
    if (v == r) {
        h = 30.0 * (g - b) / c;
    } else if (v == g) {
        h = 60.0 + 30.0 * (b - r) / c;
    } else {
        h = 120.0 + 30.0 * (r - g) / c;
    }
    if (h < 0.0) h += 180.0;
    int rounded = static_cast<int>(std::floor(h + 0.5));
    if (rounded >= 180) rounded -= 180;
    out.h = static_cast<std::uint8_t>(rounded);
    return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const auto px = rgb_to_hsv_pixel(src[i], src[i + 1], src[i + 2]);
        dst[i] = px.h;
        dst[i + 1] = px.s;
        dst[i + 2] = px.v;
    }
    return out;
}

}  // namespace snowroad
