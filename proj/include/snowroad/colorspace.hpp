#pragma once

#include <cstdint>

#include "snowroad/image.hpp"

namespace snowroad {

/// Hue in half-degree units [0, 179]; saturation and value in [0, 255].
struct HsvPixel {
    std::uint8_t h = 0;
    std::uint8_t s = 0;
    std::uint8_t v = 0;

    bool operator==(const HsvPixel&) const = default;
};

/// 8-bit RGB to HSV.
///
///   V = max(R, G, B),  C = V - min(R, G, B)
///   S = 255 C / V  (0 when V = 0)
///   H = 30 (G - B) / C        if V = R
///       60 + 30 (B - R) / C   if V = G
///      120 + 30 (R - G) / C   if V = B
///
/// Ties on the maximum resolve in R, G, B order. A negative hue gets +180.
/// H and S are rounded half-up; a hue that rounds to 180 wraps to 0. C = 0
/// gives H = 0.
HsvPixel rgb_to_hsv_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

HsvImage rgb_to_hsv(const RgbImage& img);

}  // namespace snowroad
