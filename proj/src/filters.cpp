#include "snowroad/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "snowroad/segmentation.hpp"

namespace snowroad {
namespace {

void require_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        fail(ErrorCode::InvalidParameter, "gaussian sigma must be > 0, got " + std::to_string(sigma));
    }
}

// Separable convolution over interleaved 8-bit data; rows first, then
// columns, both in double, rounded once.
void blur_planes(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width, int height,
                 int channels, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    std::vector<double> tmp(src.size());

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int xx = std::clamp(x + k, 0, width - 1);
                    acc += kernel[k + radius] * src[(static_cast<std::size_t>(y) * width + xx) * channels + c];
                }
                tmp[(static_cast<std::size_t>(y) * width + x) * channels + c] = acc;
            }
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int yy = std::clamp(y + k, 0, height - 1);
                    acc += kernel[k + radius] * tmp[(static_cast<std::size_t>(yy) * width + x) * channels + c];
                }
                dst[(static_cast<std::size_t>(y) * width + x) * channels + c] = quantize(acc);
            }
        }
    }
}

struct ChannelStats {
    double mean = 0.0;
    double stddev = 0.0;
};

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
    require_sigma(sigma);
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (auto& v : k) v /= sum;
    return k;
}

HsvImage gaussian_blur(const HsvImage& img, double sigma) {
    require_sigma(sigma);
    HsvImage out(img.width(), img.height());
    blur_planes(img.data(), out.data(), img.width(), img.height(), 3, sigma);
    return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    require_sigma(sigma);
    GrayImage out(img.width(), img.height());
    blur_planes(img.data(), out.data(), img.width(), img.height(), 1, sigma);
    return out;
}

HsvImage equalize_value_channel(const HsvImage& img) {
    std::array<std::size_t, 256> cdf{};
    auto src = img.data();
    for (std::size_t i = 2; i < src.size(); i += 3) ++cdf[src[i]];
    for (std::size_t v = 1; v < cdf.size(); ++v) cdf[v] += cdf[v - 1];

    const std::size_t n = img.pixel_count();
    const std::size_t cdf_min = *std::find_if(cdf.begin(), cdf.end(), [](std::size_t c) { return c > 0; });
    if (n == cdf_min) return img;

    std::array<std::uint8_t, 256> lut{};
    for (std::size_t v = 0; v < lut.size(); ++v) {
        const double num = cdf[v] >= cdf_min ? static_cast<double>(cdf[v] - cdf_min) : 0.0;
        lut[v] = quantize(255.0 * num / static_cast<double>(n - cdf_min));
    }
    HsvImage out = img;
    auto dst = out.data();
    for (std::size_t i = 2; i < dst.size(); i += 3) dst[i] = lut[dst[i]];
    return out;
}

BinaryMask detect_shadow_mask(const HsvImage& img, const ShadowParams& p) {
    BinaryMask out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.bits();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = (src[3 * i + 2] < p.v_threshold && src[3 * i + 1] >= p.s_threshold) ? 1 : 0;
    }
    return out;
}

RgbImage remove_shadow(const RgbImage& img, const BinaryMask& shadow, const ShadowParams& p,
                       FilterWarnings* warnings) {
    if (p.buffer_radius < 1) {
        fail(ErrorCode::InvalidParameter, "shadow buffer_radius must be >= 1");
    }
    if (!img.same_size(shadow.width(), shadow.height())) {
        fail(ErrorCode::DimensionMismatch, "shadow mask does not match image size");
    }
    auto warn = [&](std::string msg) {
        if (warnings) warnings->messages.push_back(std::move(msg));
    };

    const std::size_t shadow_count = shadow.count();
    if (shadow_count == 0) return img;

    const int side = 2 * p.buffer_radius + 1;
    const BinaryMask buffer = dilate(shadow, StructuringElement{side, side}) - shadow;
    const std::size_t buffer_count = buffer.count();
    if (buffer_count == 0) {
        warn("remove_shadow: buffer region is empty; image left unchanged");
        return img;
    }

    auto src = img.data();
    auto sbits = shadow.bits();
    auto bbits = buffer.bits();
    std::array<ChannelStats, 3> lit{};
    std::array<double, 3> shadow_mean{};
    for (int c = 0; c < 3; ++c) {
        double ssum = 0.0, bsum = 0.0, bsq = 0.0;
        for (std::size_t i = 0; i < sbits.size(); ++i) {
            const double v = src[3 * i + c];
            if (sbits[i]) ssum += v;
            if (bbits[i]) {
                bsum += v;
                bsq += v * v;
            }
        }
        shadow_mean[c] = ssum / static_cast<double>(shadow_count);
        lit[c].mean = bsum / static_cast<double>(buffer_count);
        const double var = bsq / static_cast<double>(buffer_count) - lit[c].mean * lit[c].mean;
        lit[c].stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    }

    RgbImage out = img;
    auto dst = out.data();
    static constexpr std::array<const char*, 3> kNames = {"R", "G", "B"};
    for (int c = 0; c < 3; ++c) {
        if (lit[c].stddev == 0.0) {
            warn(std::string("remove_shadow: buffer channel ") + kNames[c] + " is flat; channel left unchanged");
            continue;
        }
        for (std::size_t i = 0; i < sbits.size(); ++i) {
            if (!sbits[i]) continue;
            dst[3 * i + c] = quantize(lit[c].mean + (src[3 * i + c] - shadow_mean[c]) / lit[c].stddev);
        }
    }
    return out;
}

RgbImage simulate_rain_snow(const RgbImage& clean, const RgbImage& streaks, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        fail(ErrorCode::InvalidParameter, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!clean.same_size(streaks.width(), streaks.height())) {
        fail(ErrorCode::DimensionMismatch, "streak image does not match background size");
    }
    RgbImage out(clean.width(), clean.height());
    auto b = clean.data();
    auto e = streaks.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = quantize(alpha * e[i] + (1.0 - alpha) * b[i]);
    }
    return out;
}

RgbImage median_filter(const RgbImage& img, int radius) {
    if (radius < 1) fail(ErrorCode::InvalidParameter, "median radius must be >= 1");
    const int w = img.width();
    const int h = img.height();
    const int side = 2 * radius + 1;
    std::vector<std::uint8_t> window(static_cast<std::size_t>(side) * side);
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                std::size_t n = 0;
                for (int dy = -radius; dy <= radius; ++dy) {
                    const int yy = std::clamp(y + dy, 0, h - 1);
                    for (int dx = -radius; dx <= radius; ++dx) {
                        window[n++] = img.at(std::clamp(x + dx, 0, w - 1), yy, c);
                    }
                }
                std::nth_element(window.begin(), mid, window.end());
                out.at(x, y, c) = *mid;
            }
        }
    }
    return out;
}

BinaryMask streak_mask(const RgbImage& img, const RgbImage& background, std::uint8_t streak_threshold) {
    const auto g = to_gray(img);
    const auto gb = to_gray(background);
    BinaryMask out(img.width(), img.height());
    auto a = g.data();
    auto b = gb.data();
    auto dst = out.bits();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = (static_cast<int>(a[i]) - static_cast<int>(b[i]) > streak_threshold) ? 1 : 0;
    }
    return out;
}

std::uint8_t guidance_intensity(double background_gray, double destreaked_gray) noexcept {
    return quantize((background_gray + destreaked_gray) / 2.0);
}

RgbImage remove_rain_snow(const RgbImage& img, const RainSnowParams& p) {
    if (p.median_radius < 1) fail(ErrorCode::InvalidParameter, "rain/snow median_radius must be >= 1");
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
        fail(ErrorCode::InvalidParameter, "rain/snow alpha must lie in [0, 1]");
    }
    const RgbImage background = median_filter(img, p.median_radius);
    const BinaryMask streaks = streak_mask(img, background, p.streak_threshold);

    RgbImage out = img;
    auto src = img.data();
    auto bg = background.data();
    auto dst = out.data();
    auto bits = streaks.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) continue;
        std::array<double, 3> destreaked{};
        for (int c = 0; c < 3; ++c) {
            const double excess = std::max(0.0, static_cast<double>(src[3 * i + c]) - bg[3 * i + c]);
            destreaked[c] = std::max(0.0, src[3 * i + c] - p.alpha * excess);
        }
        const double bg_gray = luma(bg[3 * i], bg[3 * i + 1], bg[3 * i + 2]);
        const double guide = guidance_intensity(bg_gray, luma(destreaked[0], destreaked[1], destreaked[2]));
        for (int c = 0; c < 3; ++c) {
            dst[3 * i + c] = bg_gray > 0.0 ? quantize(bg[3 * i + c] * guide / bg_gray) : quantize(guide);
        }
    }
    return out;
}

RgbImage light_filter(const RgbImage& img, const LightFilterParams& p) {
    if (!(p.lambda_max > 1.0 / 3.0 && p.lambda_max <= 1.0)) {
        fail(ErrorCode::InvalidParameter,
             "lambda_max must lie in (1/3, 1], got " + std::to_string(p.lambda_max));
    }
    const double denom = 1.0 - 3.0 * p.lambda_max;
    RgbImage out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const double r = src[i], g = src[i + 1], b = src[i + 2];
        const double specular = (std::max({r, g, b}) - p.lambda_max * (r + g + b)) / denom;
        dst[i] = quantize(r - specular);
        dst[i + 1] = quantize(g - specular);
        dst[i + 2] = quantize(b - specular);
    }
    return out;
}

}  // namespace snowroad
