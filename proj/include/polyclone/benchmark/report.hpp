#pragma once

#include <string>

#include "polyclone/benchmark/precision.hpp"
#include "polyclone/benchmark/recall.hpp"

namespace polyclone::bench {

/// Per-bucket recall as JSON: percent and raw detected counts.
std::string recall_report_json(const RecallScore& score, const MatchConfig& cfg);

/// Per-group aggregate and median precision plus per-pair rows as JSON.
std::string precision_report_json(const PrecisionScore& score);

}  // namespace polyclone::bench
