#pragma once

#include <cstdint>

#include "snowroad/image.hpp"

namespace snowroad {

/// Snow is bright and desaturated: S <= s_max and V >= v_min. Hue is ignored.
struct SnowThresholds {
    std::uint8_t s_max = 30;
    std::uint8_t v_min = 150;

    bool operator==(const SnowThresholds&) const = default;
};

/// Rectangular structuring element with odd sides, centred on its middle pixel.
struct StructuringElement {
    int width = 5;
    int height = 5;

    /// Throws InvalidParameter unless both sides are odd and >= 1.
    void validate() const;
    int radius_x() const noexcept { return width / 2; }
    int radius_y() const noexcept { return height / 2; }

    bool operator==(const StructuringElement&) const = default;
};

BinaryMask classify_snow(const HsvImage& img, const SnowThresholds& t);

/// Out-of-bounds pixels count as false for both primitives.
BinaryMask erode(const BinaryMask& m, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& m, const StructuringElement& se);

BinaryMask opening(const BinaryMask& m, const StructuringElement& se);
BinaryMask closing(const BinaryMask& m, const StructuringElement& se);

/// Opening followed by closing with the same element. Removes specks smaller
/// than the element, then fills pinholes smaller than the element.
BinaryMask open_close(const BinaryMask& m, const StructuringElement& se);

}  // namespace snowroad
