#include "snowroad/evaluation.hpp"

#include <cstdio>

#include "json.hpp"

namespace snowroad {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
    require_same_size(pred, truth, "confusion");
    ConfusionCounts c;
    auto p = pred.bits();
    auto t = truth.bits();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i]) {
            ++(t[i] ? c.tp : c.fp);
        } else {
            ++(t[i] ? c.fn : c.tn);
        }
    }
    return c;
}

double fnr(const ConfusionCounts& c) noexcept {
    const auto pos = c.tp + c.fn;
    return pos == 0 ? 0.0 : static_cast<double>(c.fn) / static_cast<double>(pos);
}

double fpr(const ConfusionCounts& c) noexcept {
    const auto neg = c.tn + c.fp;
    return neg == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(neg);
}

ImageMetrics evaluate_image(const BinaryMask& pred, const BinaryMask& truth, const std::string& id) {
    if (!pred.same_size(truth)) {
        fail(ErrorCode::DimensionMismatch, "image '" + id + "': prediction and truth differ in size");
    }
    const auto c = confusion(pred, truth);
    ImageMetrics m;
    m.id = id;
    m.fnr = fnr(c);
    m.fpr = fpr(c);
    if (c.tp + c.fn == 0) m.flags.emplace_back("no_positive_truth");
    if (c.tn + c.fp == 0) m.flags.emplace_back("no_negative_truth");
    return m;
}

MetricsReport evaluate_corpus(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) fail(ErrorCode::EmptyCorpus, "no images to evaluate");
    MetricsReport report;
    report.per_image.reserve(pairs.size());
    double sum_fnr = 0.0, sum_fpr = 0.0;
    for (const auto& pair : pairs) {
        auto m = evaluate_image(pair.pred, pair.truth, pair.id);
        m.flags.insert(m.flags.end(), pair.flags.begin(), pair.flags.end());
        sum_fnr += m.fnr;
        sum_fpr += m.fpr;
        report.per_image.push_back(std::move(m));
    }
    report.mean_fnr = sum_fnr / static_cast<double>(pairs.size());
    report.mean_fpr = sum_fpr / static_cast<double>(pairs.size());
    return report;
}

std::string to_json(const MetricsReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& m : report.per_image) {
        rows.push_back({{"id", m.id}, {"fnr", m.fnr}, {"fpr", m.fpr}, {"degenerate_flags", m.flags}});
    }
    const nlohmann::json doc = {{"per_image", rows}, {"mean_fnr", report.mean_fnr}, {"mean_fpr", report.mean_fpr}};
    return doc.dump(2) + "\n";
}

std::string to_csv(const MetricsReport& report) {
    std::string out = "id,fnr,fpr\n";
    char buf[64];
    for (const auto& m : report.per_image) {
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", m.fnr, m.fpr);
        out += m.id;
        out += buf;
    }
    return out;
}

}  // namespace snowroad
