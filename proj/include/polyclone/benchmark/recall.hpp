#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polyclone/benchmark/corpus.hpp"
#include "polyclone/detector.hpp"

namespace polyclone::bench {

/// Intra-problem file pair labeled with its normalized edit similarity.
struct LabeledClone {
    const Submission* left = nullptr;
    const Submission* right = nullptr;
    double lev_simi = 0.0;
};

/// Recall buckets: [0.20,0.39], [0.40,0.59], [0.60,0.79], [0.80,0.99], 1.0.
inline constexpr std::size_t kBucketCount = 5;
inline constexpr std::array<const char*, kBucketCount> kBucketLabels = {
    "[0.20,0.39]", "[0.40,0.59]", "[0.60,0.79]", "[0.80,0.99]", "1.0"};

/// Bucket of a similarity value (truncated to two decimals); -1 below 0.20.
int bucket_of(double lev_simi) noexcept;

struct RecallDataset {
    std::vector<LabeledClone> clones;
    std::array<std::size_t, kBucketCount> histogram{};
    std::vector<std::string> warnings;
};

/// Labels every intra-problem pair of the selected problems (all when empty)
/// whose submissions meet `match` minimums; pairs below 0.20 are dropped.
RecallDataset build_recall_dataset(const Corpus& corpus, const std::vector<std::string>& selection,
                                   const MatchConfig& match);

/// Truth CSV: problemId,leftSubmission,rightSubmission,levSimi
void write_truth(std::span<const LabeledClone> clones, std::ostream& out);

struct TruthRow {
    std::string problem_id;
    std::string left;
    std::string right;
    double lev_simi = 0.0;
};
/// Throws Error{MalformedTruthFile}.
std::vector<TruthRow> read_truth(std::istream& in);

struct BucketRecall {
    std::size_t total = 0;
    std::size_t detected = 0;
    [[nodiscard]] double recall() const noexcept {
        return total == 0 ? 0.0 : static_cast<double>(detected) / static_cast<double>(total);
    }
};

using RecallScore = std::array<BucketRecall, kBucketCount>;

/// Path key under which a submission appears in clone reports.
using FileKeyFn = std::string (*)(const Submission&);
std::string default_file_key(const Submission& s);

/// A truth pair is detected when some reported pair covers at least
/// cfg.coverage of the lines of both files (either orientation).
RecallScore match_clones(std::span<const ClonePair> report, std::span<const LabeledClone> truth,
                         const MatchConfig& cfg, FileKeyFn key = default_file_key);

/// Fraction of [1, line_count] covered by segment lines [s, e].
double line_coverage(const CodeSegment& seg, std::uint32_t line_count) noexcept;

}  // namespace polyclone::bench

namespace polyclone::bench {

/// A recall dataset read back from disk: truth rows resolved against the
/// materialized corpus (`<dir>/truth.csv`, `<dir>/corpus/<pid>/<sid><ext>`).
struct LoadedRecallDataset {
    std::deque<Submission> submissions;
    std::vector<LabeledClone> clones;
};

LoadedRecallDataset load_recall_dataset(const std::filesystem::path& dir, const LanguageConfig& cfg);

}  // namespace polyclone::bench
