#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polyclone/benchmark/corpus.hpp"
#include "polyclone/detector.hpp"

namespace polyclone::bench {

enum class PrecisionGroup : std::uint8_t { I, II, III };

std::string_view to_string(PrecisionGroup group) noexcept;

/// Group for a description similarity: [0,0.3) I, [0.3,0.6) II, [0.6,0.9) III.
std::optional<PrecisionGroup> group_of(double jaccard) noexcept;

struct ProblemPair {
    std::string pid_a;
    std::string pid_b;
    double jaccard = 0.0;
    PrecisionGroup group = PrecisionGroup::I;

    /// Folder name of the pair's detection unit.
    [[nodiscard]] std::string unit_name() const { return pid_a + "__" + pid_b; }
};

/// Problem statement with the constraints/input/output/sample sections removed
/// and markup stripped.
std::string trim_description(std::string_view raw);

/// Lowercase alphanumeric words.
std::set<std::string> word_set(std::string_view text);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) noexcept;

struct PrecisionOptions {
    std::uint64_t seed = 0;
    std::size_t pairs_per_group = 30;
    /// Maximum relative difference of the two problems' mean code lengths.
    double max_length_gap = 0.3;
};

struct PrecisionDataset {
    std::vector<ProblemPair> pairs;  // grouped I, II, III; sampled order within group
    std::vector<std::string> warnings;
};

/// Samples non-overlapping problem pairs per group under the seed.
/// `descriptions` maps problem id to raw description text.
PrecisionDataset build_precision_dataset(const Corpus& corpus,
                                         const std::map<std::string, std::string>& descriptions,
                                         const PrecisionOptions& options);

/// Writes pairs.csv and <group>/<unit>/<pid>/<sid><ext> for every pair.
void materialize_precision(const std::filesystem::path& out, const PrecisionDataset& dataset,
                           const Corpus& corpus);

std::vector<ProblemPair> read_pairs_csv(std::istream& in);

struct PairScore {
    ProblemPair pair;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    [[nodiscard]] bool empty() const noexcept { return true_positives + false_positives == 0; }
    [[nodiscard]] double precision() const noexcept {
        return empty() ? 0.0
                       : static_cast<double>(true_positives) /
                             static_cast<double>(true_positives + false_positives);
    }
};

struct GroupPrecision {
    std::size_t pairs = 0;
    std::size_t empty_pairs = 0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    double aggregate = 0.0;
    double median = 0.0;
};

struct PrecisionScore {
    std::vector<PairScore> per_pair;
    std::array<GroupPrecision, 3> groups{};
    double overall = 0.0;
};

/// Problem of a report path inside a detection unit: its first component.
std::string problem_of(const std::string& report_path);

/// Counts intra-problem (true) and cross-problem (false) reported pairs.
PairScore score_pair(const ProblemPair& pair, std::span<const ClonePair> report);

PrecisionScore score_precision(std::vector<PairScore> per_pair);

}  // namespace polyclone::bench
