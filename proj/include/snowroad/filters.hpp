#pragma once

#include <string>
#include <vector>

#include "snowroad/image.hpp"

namespace snowroad {

/// Non-fatal notes raised by filters that fell back to the identity.
struct FilterWarnings {
    std::vector<std::string> messages;
};

/// Light (specular) filter bound. Must lie in (1/3, 1].
struct LightFilterParams {
    double lambda_max = 0.6;

    bool operator==(const LightFilterParams&) const = default;
};

/// Shadows are dark but keep their chroma: V < v_threshold and S >= s_threshold.
/// The lit reference region is a ring of buffer_radius pixels around the shadow.
struct ShadowParams {
    std::uint8_t v_threshold = 60;
    std::uint8_t s_threshold = 40;
    int buffer_radius = 7;

    bool operator==(const ShadowParams&) const = default;
};

/// alpha is the fraction of the bright excess over the background that is
/// treated as streak when forming the de-streaked gray image.
struct RainSnowParams {
    int median_radius = 2;
    std::uint8_t streak_threshold = 40;
    double alpha = 0.5;

    bool operator==(const RainSnowParams&) const = default;
};

/// Separable Gaussian, radius ceil(3 sigma), replicated borders, one
/// quantization at the end. Applied to every channel independently.
HsvImage gaussian_blur(const HsvImage& img, double sigma);
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Normalized 1-D kernel of length 2 ceil(3 sigma) + 1.
std::vector<double> gaussian_kernel(double sigma);

/// Histogram equalization of the V plane only. An image whose V is constant
/// is returned unchanged.
HsvImage equalize_value_channel(const HsvImage& img);

BinaryMask detect_shadow_mask(const HsvImage& img, const ShadowParams& p);

/// Remaps shadow pixels per channel to  mu_buff + (I - mu_shadow) / sigma_buff
/// where mu_buff and sigma_buff (standard deviation) are taken over the ring
/// dilate(shadow) - shadow. An empty mask, an empty ring or a flat ring
/// channel leaves the pixels as they are and adds a warning.
RgbImage remove_shadow(const RgbImage& img, const BinaryMask& shadow, const ShadowParams& p,
                       FilterWarnings* warnings = nullptr);

/// Per-sample alpha * streaks + (1 - alpha) * clean, rounded half-up.
RgbImage simulate_rain_snow(const RgbImage& clean, const RgbImage& streaks, double alpha);

/// Channelwise median over a (2r+1)^2 window with replicated borders.
RgbImage median_filter(const RgbImage& img, int radius);

/// Pixels whose gray level exceeds the median background by more than
/// streak_threshold.
BinaryMask streak_mask(const RgbImage& img, const RgbImage& background, std::uint8_t streak_threshold);

/// Guidance intensity: average of the background gray and the de-streaked
/// gray, rounded half-up.
std::uint8_t guidance_intensity(double background_gray, double destreaked_gray) noexcept;

/// Single-image rain/snow removal. Streak pixels are replaced by the median
/// background rescaled to the guidance intensity; all other pixels are
/// returned untouched.
RgbImage remove_rain_snow(const RgbImage& img, const RainSnowParams& p);

/// Subtracts the specular estimate
///   s = (max_u I_u - lambda_max * sum_u I_u) / (1 - 3 lambda_max)
/// from each channel. Achromatic pixels go to black.
RgbImage light_filter(const RgbImage& img, const LightFilterParams& p);

}  // namespace snowroad
