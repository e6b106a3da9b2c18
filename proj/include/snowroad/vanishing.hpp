#pragma once

#include <optional>
#include <utility>

#include "snowroad/image.hpp"

namespace snowroad {

/// Road triangle: apex plus a horizontal base on row base_y. Pixel (x, y) is
/// addressed by its centre at integer coordinates.
struct Triangle {
    double apex_x = 0.0;
    double apex_y = 0.0;
    int base_left = 0;
    int base_right = 0;
    int base_y = 0;

    /// Throws InvalidParameter unless base_left < base_right,
    /// 0 <= apex_y < base_y <= height - 1 and the apex is inside the image.
    void validate(int width, int height) const;

    /// Boundary-inclusive point-in-triangle test.
    bool contains(double x, double y) const noexcept;

    /// Inclusive column range of row y covered by the triangle, clipped to
    /// [0, width - 1]; empty when the row misses it.
    std::optional<std::pair<int, int>> row_span(int y, int width) const noexcept;

    bool operator==(const Triangle&) const = default;
};

struct VanishingPoint {
    int x = 0;
    int y = 0;

    bool operator==(const VanishingPoint&) const = default;
};

struct RoadRegion {
    Triangle triangle;
    VanishingPoint vanishing_point;
    BinaryMask mask;
};

struct FitOptions {
    /// Minimum fraction of true pixels in the snow mask.
    double min_coverage = 0.02;
    /// Narrowest acceptable base, as a fraction of the image width.
    double min_base_width_frac = 0.10;
    /// Coarse apex grid step; refinement covers +-stride around the best node.
    int coarse_stride = 8;
    /// Height of the bottom band used to seed the base, as a fraction of rows.
    double base_band_frac = 0.10;
    double base_low_percentile = 0.02;
    double base_high_percentile = 0.98;
};

/// |a AND b| / |a OR b|, 0 when both are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

BinaryMask rasterize_triangle(const Triangle& t, int width, int height);

/// Fits the road triangle to a snow mask by maximizing IoU.
///
/// The base sits on the bottom row. Its ends are seeded from the 2nd/98th
/// percentile columns of snow in the bottom band. The apex is searched on a
/// coarse grid above the band, refined at unit step around the best node,
/// and then apex and base ends are polished alternately at unit step. A
/// joint search over small moves of all four coordinates finishes the fit.
/// Ties prefer the smaller apex_y, then the smaller apex_x.
///
/// Throws NoRoadDetected when coverage or base width is too small and
/// DegenerateBase when the band holds fewer than two distinct columns.
Triangle fit_triangle(const BinaryMask& snow, const FitOptions& options = {});

/// IoU of the rasterized triangle against the mask, evaluated row by row.
double triangle_iou(const Triangle& t, const BinaryMask& mask);

/// Road = snow AND triangle; the vanishing point is the rounded apex.
RoadRegion extract_road(const BinaryMask& snow, const Triangle& t);

}  // namespace snowroad
