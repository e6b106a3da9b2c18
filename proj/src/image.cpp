#include "snowroad/image.hpp"

#include <numeric>

namespace snowroad {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::CorruptData: return "CorruptData";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NoRoadDetected: return "NoRoadDetected";
        case ErrorCode::DegenerateBase: return "DegenerateBase";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        fail(ErrorCode::InvalidParameter, "mask dimensions must be positive, got " +
                                              std::to_string(width) + "x" +
                                              std::to_string(height));
    }
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::operator~() const {
    BinaryMask out = *this;
    for (auto& b : out.bits_) b = b ? 0 : 1;
    return out;
}

BinaryMask BinaryMask::operator&(const BinaryMask& o) const {
    require_same_size(*this, o, "mask AND");
    BinaryMask out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & o.bits_[i];
    return out;
}

BinaryMask BinaryMask::operator|(const BinaryMask& o) const {
    require_same_size(*this, o, "mask OR");
    BinaryMask out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | o.bits_[i];
    return out;
}

BinaryMask BinaryMask::operator-(const BinaryMask& o) const {
    require_same_size(*this, o, "mask difference");
    BinaryMask out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & (o.bits_[i] ^ 1);
    return out;
}

void require_same_size(const BinaryMask& a, const BinaryMask& b, const std::string& what) {
    if (!a.same_size(b)) {
        fail(ErrorCode::DimensionMismatch,
             what + ": " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                 " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
}

BinaryMask mask_from_gray(const GrayImage& g, std::uint8_t threshold) {
    BinaryMask m(g.width(), g.height());
    auto src = g.data();
    auto dst = m.bits();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= threshold ? 1 : 0;
    return m;
}

GrayImage mask_to_gray(const BinaryMask& m) {
    GrayImage g(m.width(), m.height());
    auto src = m.bits();
    auto dst = g.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
    return g;
}

GrayImage to_gray(const RgbImage& img) {
    GrayImage g(img.width(), img.height());
    auto src = img.data();
    auto dst = g.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = quantize(luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]));
    }
    return g;
}

}  // namespace snowroad
