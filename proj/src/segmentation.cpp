#include "snowroad/segmentation.hpp"

#include <vector>

namespace snowroad {
namespace {

// 1-D pass over rows (horizontal) or columns (vertical). For erosion the
// output is true iff every sample in [i - r, i + r] is in bounds and true;
// for dilation iff any in-bounds sample is true. Uses a running count.
BinaryMask pass(const BinaryMask& m, int radius, bool horizontal, bool erosion) {
    const int w = m.width();
    const int h = m.height();
    const int lines = horizontal ? h : w;
    const int len = horizontal ? w : h;
    BinaryMask out(w, h);
    std::vector<int> prefix(static_cast<std::size_t>(len) + 1);

    for (int line = 0; line < lines; ++line) {
        for (int i = 0; i < len; ++i) {
            const bool bit = horizontal ? m.get(i, line) : m.get(line, i);
            prefix[i + 1] = prefix[i] + (bit ? 1 : 0);
        }
        for (int i = 0; i < len; ++i) {
            const int lo = i - radius;
            const int hi = i + radius;
            const int count = prefix[std::min(hi, len - 1) + 1] - prefix[std::max(lo, 0)];
            bool v;
            if (erosion) {
                v = lo >= 0 && hi < len && count == 2 * radius + 1;
            } else {
                v = count > 0;
            }
            if (horizontal) {
                out.set(i, line, v);
            } else {
                out.set(line, i, v);
            }
        }
    }
    return out;
}

}  // namespace

void StructuringElement::validate() const {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
        fail(ErrorCode::InvalidParameter, "structuring element must have odd sides >= 1, got " +
                                              std::to_string(width) + "x" + std::to_string(height));
    }
}

BinaryMask classify_snow(const HsvImage& img, const SnowThresholds& t) {
    BinaryMask out(img.width(), img.height());
    auto src = img.data();
    auto dst = out.bits();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const auto s = src[3 * i + 1];
        const auto v = src[3 * i + 2];
        dst[i] = (s <= t.s_max && v >= t.v_min) ? 1 : 0;
    }
    return out;
}

// A rectangle is the product of two segments, so both primitives separate.
BinaryMask erode(const BinaryMask& m, const StructuringElement& se) {
    se.validate();
    return pass(pass(m, se.radius_x(), true, true), se.radius_y(), false, true);
}

BinaryMask dilate(const BinaryMask& m, const StructuringElement& se) {
    se.validate();
    return pass(pass(m, se.radius_x(), true, false), se.radius_y(), false, false);
}

BinaryMask opening(const BinaryMask& m, const StructuringElement& se) {
    return dilate(erode(m, se), se);
}

// Computed on a canvas padded with background by the SE radius, then
// cropped. Cropping between the two steps would let the erosion eat every
// true pixel within one radius of the frame, so closing would no longer
// contain its input where the road meets the bottom edge.
BinaryMask closing(const BinaryMask& m, const StructuringElement& se) {
    se.validate();
    const int rx = se.radius_x();
    const int ry = se.radius_y();
    BinaryMask padded(m.width() + 2 * rx, m.height() + 2 * ry);
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) padded.set(x + rx, y + ry, m.get(x, y));
    }
    const BinaryMask closed = erode(dilate(padded, se), se);
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) out.set(x, y, closed.get(x + rx, y + ry));
    }
    return out;
}

BinaryMask open_close(const BinaryMask& m, const StructuringElement& se) {
    return closing(opening(m, se), se);
}

}  // namespace snowroad
