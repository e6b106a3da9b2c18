#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snowroad/image.hpp"

namespace snowroad {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

/// fn / (tp + fn); 0 when the truth has no road.
double fnr(const ConfusionCounts& c) noexcept;
/// fp / (tn + fp); 0 when the truth has no background.
double fpr(const ConfusionCounts& c) noexcept;

struct ImageMetrics {
    std::string id;
    double fnr = 0.0;
    double fpr = 0.0;
    /// "no_positive_truth", "no_negative_truth", or caller-supplied notes
    /// such as "no_road_detected".
    std::vector<std::string> flags;
};

struct MetricsReport {
    std::vector<ImageMetrics> per_image;
    double mean_fnr = 0.0;
    double mean_fpr = 0.0;
};

struct EvalPair {
    BinaryMask pred;
    BinaryMask truth;
    std::string id;
    std::vector<std::string> flags;
};

ImageMetrics evaluate_image(const BinaryMask& pred, const BinaryMask& truth, const std::string& id);

/// Per-image rates plus their unweighted means. Rows keep input order.
/// Throws EmptyCorpus for an empty list and DimensionMismatch naming the
/// offending id.
MetricsReport evaluate_corpus(const std::vector<EvalPair>& pairs);

/// {per_image: [{id, fnr, fpr, degenerate_flags}], mean_fnr, mean_fpr}
std::string to_json(const MetricsReport& report);
/// "id,fnr,fpr" header plus one row per image.
std::string to_csv(const MetricsReport& report);

}  // namespace snowroad
