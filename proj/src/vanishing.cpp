#include "snowroad/vanishing.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace snowroad {
namespace {

double edge(double px, double py, double qx, double qy, double x, double y) noexcept {
    return (qx - px) * (y - py) - (qy - py) * (x - px);
}

/// Exact IoU as a fraction so candidates compare without rounding noise.
struct Score {
    std::uint64_t inter = 0;
    std::uint64_t uni = 0;

    double value() const noexcept {
        return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    bool better_than(const Score& o) const noexcept {
        // inter/uni > o.inter/o.uni, with 0/0 treated as 0.
        if (uni == 0) return false;
        if (o.uni == 0) return inter > 0;
        return inter * o.uni > o.inter * uni;
    }
    bool ties(const Score& o) const noexcept { return !better_than(o) && !o.better_than(*this); }
};

/// Row prefix sums of the mask; scores any triangle in O(height).
class TriangleScorer {
public:
    explicit TriangleScorer(const BinaryMask& mask)
        : width_(mask.width()), height_(mask.height()),
          prefix_(static_cast<std::size_t>(mask.height()) * (mask.width() + 1)) {
        for (int y = 0; y < height_; ++y) {
            auto* row = &prefix_[static_cast<std::size_t>(y) * (width_ + 1)];
            for (int x = 0; x < width_; ++x) row[x + 1] = row[x] + (mask.get(x, y) ? 1 : 0);
            total_ += row[width_];
        }
    }

    std::uint64_t total() const noexcept { return total_; }

    Score score(const Triangle& t) const noexcept {
        std::uint64_t inter = 0;
        std::uint64_t area = 0;
        const int y0 = std::max(0, static_cast<int>(std::floor(t.apex_y)));
        for (int y = y0; y <= t.base_y && y < height_; ++y) {
            const auto span = t.row_span(y, width_);
            if (!span) continue;
            const auto* row = &prefix_[static_cast<std::size_t>(y) * (width_ + 1)];
            inter += row[span->second + 1] - row[span->first];
            area += static_cast<std::uint64_t>(span->second - span->first + 1);
        }
        return {inter, area + total_ - inter};
    }

private:
    int width_;
    int height_;
    std::vector<std::uint32_t> prefix_;
    std::uint64_t total_ = 0;
};

struct Candidate {
    Triangle tri;
    Score score;
};

// Higher score wins; ties go to smaller apex_y, then smaller apex_x.
bool prefer(const Candidate& a, const Candidate& b) noexcept {
    if (a.score.better_than(b.score)) return true;
    if (!a.score.ties(b.score)) return false;
    if (a.tri.apex_y != b.tri.apex_y) return a.tri.apex_y < b.tri.apex_y;
    return a.tri.apex_x < b.tri.apex_x;
}

Candidate search_apex(const TriangleScorer& scorer, Triangle base, int x_lo, int x_hi, int y_lo, int y_hi,
                      int step) {
    Candidate best{base, {}};
    bool have = false;
    for (int y = y_lo; y <= y_hi; y += step) {
        for (int x = x_lo; x <= x_hi; x += step) {
            Triangle t = base;
            t.apex_x = x;
            t.apex_y = y;
            Candidate c{t, scorer.score(t)};
            if (!have || prefer(c, best)) {
                best = c;
                have = true;
            }
        }
    }
    return best;
}

// Moves one base end within [lo, hi]; keeps the current value unless a
// strictly better score exists, otherwise the nearest best position.
bool polish_base_end(const TriangleScorer& scorer, Candidate& cur, bool left, int lo, int hi) {
    const int start = left ? cur.tri.base_left : cur.tri.base_right;
    Candidate best = cur;
    int best_dist = 0;
    for (int v = lo; v <= hi; ++v) {
        Triangle t = cur.tri;
        (left ? t.base_left : t.base_right) = v;
        if (t.base_left >= t.base_right) continue;
        Candidate c{t, scorer.score(t)};
        const int dist = std::abs(v - start);
        if (c.score.better_than(best.score) || (c.score.ties(best.score) && dist < best_dist)) {
            best = c;
            best_dist = dist;
        }
    }
    const bool moved = !(best.tri == cur.tri);
    cur = best;
    return moved;
}

// Apex and base ends are coupled: a slanted edge can only shift sideways by
// moving the apex and one base end together, which no single-coordinate
// step sees. Tries every move of up to `reach` px in each of (apex_x,
// apex_y, base_left, base_right) and takes the best strictly improving one
// until none is left.
void pattern_search(const TriangleScorer& scorer, Candidate& cur, int width, int y_max, int reach) {
    const int side = 2 * reach + 1;
    const int moves = side * side * side * side;
    const int max_steps = 4 * (width + y_max + 2);
    for (int step = 0; step < max_steps; ++step) {
        Candidate best = cur;
        for (int d = 0; d < moves; ++d) {
            const int dax = d % side - reach, day = d / side % side - reach;
            const int dbl = d / (side * side) % side - reach, dbr = d / (side * side * side) - reach;
            if (dax == 0 && day == 0 && dbl == 0 && dbr == 0) continue;
            Triangle t = cur.tri;
            t.apex_x += dax;
            t.apex_y += day;
            t.base_left += dbl;
            t.base_right += dbr;
            if (t.apex_x < 0 || t.apex_x > width - 1 || t.apex_y < 0 || t.apex_y > y_max) continue;
            if (t.base_left < 0 || t.base_right > width - 1 || t.base_left >= t.base_right) continue;
            Candidate c{t, scorer.score(t)};
            if (c.score.better_than(cur.score) && prefer(c, best)) best = c;
        }
        if (best.tri == cur.tri) return;
        cur = best;
    }
}

}  // namespace

void Triangle::validate(int width, int height) const {
    auto bad = [](const std::string& why) { fail(ErrorCode::InvalidParameter, "invalid triangle: " + why); };
    if (!(base_left < base_right)) bad("base_left must be < base_right");
    if (!(apex_y >= 0.0 && apex_y < base_y)) bad("apex_y must lie in [0, base_y)");
    if (base_y > height - 1) bad("base_y beyond last row");
    if (!(apex_x >= 0.0 && apex_x <= width - 1)) bad("apex_x outside image");
}

bool Triangle::contains(double x, double y) const noexcept {
    const double bl = base_left, br = base_right, by = base_y;
    const double e0 = edge(apex_x, apex_y, bl, by, x, y);
    const double e1 = edge(bl, by, br, by, x, y);
    const double e2 = edge(br, by, apex_x, apex_y, x, y);
    return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

std::optional<std::pair<int, int>> Triangle::row_span(int y, int width) const noexcept {
    if (y < apex_y || y > base_y || width < 1) return std::nullopt;
    const double t = (y - apex_y) / (base_y - apex_y);
    const double xl = apex_x + (base_left - apex_x) * t;
    const double xr = apex_x + (base_right - apex_x) * t;
    // Analytic estimate, then settle the ends against the exact edge test.
    int lo = static_cast<int>(std::ceil(xl));
    int hi = static_cast<int>(std::floor(xr));
    while (contains(lo - 1, y)) --lo;
    while (lo <= hi && !contains(lo, y)) ++lo;
    while (contains(hi + 1, y)) ++hi;
    while (hi >= lo && !contains(hi, y)) --hi;
    lo = std::max(lo, 0);
    hi = std::min(hi, width - 1);
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    require_same_size(a, b, "iou");
    std::uint64_t inter = 0, uni = 0;
    auto x = a.bits();
    auto y = b.bits();
    for (std::size_t i = 0; i < x.size(); ++i) {
        inter += x[i] & y[i];
        uni += x[i] | y[i];
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask rasterize_triangle(const Triangle& t, int width, int height) {
    t.validate(width, height);
    BinaryMask out(width, height);
    for (int y = 0; y < height; ++y) {
        const auto span = t.row_span(y, width);
        if (!span) continue;
        for (int x = span->first; x <= span->second; ++x) out.set(x, y, true);
    }
    return out;
}

double triangle_iou(const Triangle& t, const BinaryMask& mask) {
    return TriangleScorer(mask).score(t).value();
}

Triangle fit_triangle(const BinaryMask& snow, const FitOptions& options) {
    const int w = snow.width();
    const int h = snow.height();
    if (h < 2 || w < 2) fail(ErrorCode::InvalidParameter, "mask too small for a triangle fit");
    if (options.coarse_stride < 1) fail(ErrorCode::InvalidParameter, "coarse_stride must be >= 1");

    const TriangleScorer scorer(snow);
    const double coverage = static_cast<double>(scorer.total()) / (static_cast<double>(w) * h);
    if (scorer.total() == 0 || coverage < options.min_coverage) {
        fail(ErrorCode::NoRoadDetected, "snow coverage " + std::to_string(coverage) + " below minimum " +
                                            std::to_string(options.min_coverage));
    }

    const int band_rows = std::max(1, static_cast<int>(std::ceil(options.base_band_frac * h)));
    const int band_top = std::max(1, h - band_rows);
    std::vector<std::uint64_t> column_hist(static_cast<std::size_t>(w));
    std::uint64_t band_count = 0;
    int distinct = 0;
    for (int x = 0; x < w; ++x) {
        for (int y = band_top; y < h; ++y) column_hist[x] += snow.get(x, y) ? 1 : 0;
        band_count += column_hist[x];
        distinct += column_hist[x] > 0 ? 1 : 0;
    }
    if (distinct < 2) {
        fail(ErrorCode::DegenerateBase, "bottom band holds " + std::to_string(distinct) + " distinct snow columns");
    }
    auto column_at_rank = [&](std::uint64_t rank) {
        std::uint64_t seen = 0;
        for (int x = 0; x < w; ++x) {
            seen += column_hist[x];
            if (seen > rank) return x;
        }
        return w - 1;
    };
    const auto last = static_cast<double>(band_count - 1);
    Triangle tri;
    tri.base_y = h - 1;
    tri.base_left = column_at_rank(static_cast<std::uint64_t>(std::floor(options.base_low_percentile * last)));
    tri.base_right = column_at_rank(static_cast<std::uint64_t>(std::ceil(options.base_high_percentile * last)));
    if (tri.base_left >= tri.base_right) {
        fail(ErrorCode::DegenerateBase, "percentile base collapsed to a single column");
    }

    const int stride = options.coarse_stride;
    const int y_max = band_top - 1;
    Candidate best = search_apex(scorer, tri, 0, w - 1, 0, y_max, stride);
    const int cx = static_cast<int>(best.tri.apex_x);
    const int cy = static_cast<int>(best.tri.apex_y);
    best = search_apex(scorer, best.tri, std::max(0, cx - stride), std::min(w - 1, cx + stride),
                       std::max(0, cy - stride), std::min(y_max, cy + stride), 1);

    // Percentile ends sit inside the true edges of a clean road; let them
    // move out (or in) a bounded distance under the same objective.
    const int reach = std::max(stride, static_cast<int>(std::ceil(0.05 * w)));
    const int seed_left = tri.base_left;
    const int seed_right = tri.base_right;
    for (int iter = 0; iter < 16; ++iter) {
        bool moved = polish_base_end(scorer, best, true, std::max(0, seed_left - reach), seed_left + reach);
        moved |= polish_base_end(scorer, best, false, seed_right - reach, std::min(w - 1, seed_right + reach));
        const int ax = static_cast<int>(best.tri.apex_x);
        const int ay = static_cast<int>(best.tri.apex_y);
        const Candidate apex = search_apex(scorer, best.tri, std::max(0, ax - 1), std::min(w - 1, ax + 1),
                                           std::max(0, ay - 1), std::min(y_max, ay + 1), 1);
        if (apex.score.better_than(best.score)) {
            best = apex;
            moved = true;
        }
        if (!moved) break;
    }
    pattern_search(scorer, best, w, y_max, 2);

    if (best.tri.base_right - best.tri.base_left < options.min_base_width_frac * w) {
        fail(ErrorCode::NoRoadDetected, "road base " + std::to_string(best.tri.base_right - best.tri.base_left) +
                                            " px narrower than the minimum drivable width");
    }
    return best.tri;
}

RoadRegion extract_road(const BinaryMask& snow, const Triangle& t) {
    RoadRegion road;
    road.triangle = t;
    road.mask = snow & rasterize_triangle(t, snow.width(), snow.height());
    road.vanishing_point = {static_cast<int>(std::floor(t.apex_x + 0.5)), static_cast<int>(std::floor(t.apex_y + 0.5))};
    return road;
}

}  // namespace snowroad
