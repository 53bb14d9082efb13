#include "polyclone/benchmark/report.hpp"

#include <cmath>

#include <json.hpp>

namespace polyclone::bench {

namespace {

double percent(double ratio) { return std::round(ratio * 1000.0) / 10.0; }

}  // namespace

std::string recall_report_json(const RecallScore& score, const MatchConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["coverage"] = cfg.coverage;
    doc["minTokens"] = cfg.min_tokens;
    doc["minLines"] = cfg.min_lines;
    auto& buckets = doc["buckets"] = nlohmann::ordered_json::array();
    std::size_t total = 0;
    std::size_t detected = 0;
    for (std::size_t k = 0; k < kBucketCount; ++k) {
        buckets.push_back({{"range", kBucketLabels[k]},
                           {"total", score[k].total},
                           {"detected", score[k].detected},
                           {"recallPercent", percent(score[k].recall())}});
        total += score[k].total;
        detected += score[k].detected;
    }
    doc["total"] = total;
    doc["detected"] = detected;
    return doc.dump(2) + "\n";
}

std::string precision_report_json(const PrecisionScore& score) {
    nlohmann::ordered_json doc;
    auto& groups = doc["groups"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < score.groups.size(); ++k) {
        const auto& g = score.groups[k];
        groups.push_back({{"group", to_string(static_cast<PrecisionGroup>(k))},
                          {"pairs", g.pairs},
                          {"emptyPairs", g.empty_pairs},
                          {"truePositives", g.true_positives},
                          {"falsePositives", g.false_positives},
                          {"precisionPercent", percent(g.aggregate)},
                          {"medianPercent", percent(g.median)}});
    }
    doc["overallPercent"] = percent(score.overall);
    auto& pairs = doc["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : score.per_pair) {
        pairs.push_back({{"group", to_string(p.pair.group)},
                         {"pidA", p.pair.pid_a},
                         {"pidB", p.pair.pid_b},
                         {"truePositives", p.true_positives},
                         {"falsePositives", p.false_positives},
                         {"precisionPercent", percent(p.precision())},
                         {"noReports", p.empty()}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace polyclone::bench
