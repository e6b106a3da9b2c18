#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snowroad/error.hpp"

namespace snowroad {

/// Round half-up and clamp to the 8-bit range. NaN maps to 0. Values within
/// 1e-9 below a half step count as the half step, so that x.5 computed with
/// representation error still rounds up.
inline std::uint8_t quantize(double v) noexcept {
    if (!(v > 0.0)) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(v + 0.5 + 1e-9));
}

/// Dense row-major 8-bit raster. The tag keeps RGB, HSV and gray buffers from
/// being mixed up at compile time even though they share a layout.
template <typename Tag, int Channels>
class Raster {
public:
    static constexpr int channels = Channels;

    Raster() = default;

    Raster(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
    }

    Raster(int width, int height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height * Channels) {
            fail(ErrorCode::InvalidParameter,
                 "raster data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(width) + "x" +
                     std::to_string(height) + "x" + std::to_string(Channels));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * height_;
    }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int x, int y, int c = 0) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * Channels + c;
    }

    std::uint8_t at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }
    std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    bool same_size(int width, int height) const noexcept {
        return width_ == width && height_ == height;
    }

    bool operator==(const Raster&) const = default;

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1) {
            fail(ErrorCode::InvalidParameter, "raster dimensions must be positive, got " +
                                                  std::to_string(width) + "x" +
                                                  std::to_string(height));
        }
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

struct RgbTag {};
struct HsvTag {};
struct GrayTag {};

using RgbImage = Raster<RgbTag, 3>;
using HsvImage = Raster<HsvTag, 3>;
using GrayImage = Raster<GrayTag, 1>;

/// Per-pixel boolean raster. Bits are stored one per byte (0 or 1).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return bits_.size(); }

    bool get(int x, int y) const noexcept {
        return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    void set(int x, int y, bool v) noexcept {
        bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
    }
    /// Out-of-bounds reads are false.
    bool get_or_false(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_ && get(x, y);
    }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::span<std::uint8_t> bits() noexcept { return bits_; }

    std::size_t count() const noexcept;
    bool same_size(const BinaryMask& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }

    BinaryMask operator~() const;
    BinaryMask operator&(const BinaryMask& o) const;
    BinaryMask operator|(const BinaryMask& o) const;
    /// Set difference: this AND NOT o.
    BinaryMask operator-(const BinaryMask& o) const;

    bool operator==(const BinaryMask&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// bit = (sample >= threshold)
BinaryMask mask_from_gray(const GrayImage& g, std::uint8_t threshold);

/// 0/255 gray rendering of a mask.
GrayImage mask_to_gray(const BinaryMask& m);

/// BT.601 luma of each pixel, rounded half-up.
GrayImage to_gray(const RgbImage& img);

inline double luma(double r, double g, double b) noexcept {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

void require_same_size(const BinaryMask& a, const BinaryMask& b, const std::string& what);

}  // namespace snowroad
