#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyclone/benchmark/recall.hpp"
#include "polyclone/benchmark/sequence.hpp"
#include "polyclone/error.hpp"
#include "synth.hpp"

using namespace polyclone;
using namespace polyclone::bench;

namespace {

Submission sub(const std::string& pid, const std::string& sid, const std::string& src) {
    return make_submission(pid, sid, src, fixtures::lang("java"), ".java");
}

// A submission with a given line count and enough tokens, without parsing.
Submission fake(const std::string& pid, const std::string& sid, std::uint32_t lines) {
    Submission s;
    s.problem_id = pid;
    s.submission_id = sid;
    s.extension = ".java";
    s.line_count = lines;
    s.retained_tokens = 100;
    return s;
}

ClonePair pair_of(const std::string& a, std::uint32_t as, std::uint32_t ae, const std::string& b, std::uint32_t bs,
                  std::uint32_t be) {
    ClonePair p;
    p.left = {a, as, ae, 0};
    p.right = {b, bs, be, 0};
    p.similarity = 1.0;
    return p;
}

}  // namespace

TEST(Buckets, Boundaries) {
    EXPECT_EQ(bucket_of(0.1999), -1);
    EXPECT_EQ(bucket_of(0.20), 0);
    EXPECT_EQ(bucket_of(0.3999), 0);
    EXPECT_EQ(bucket_of(0.40), 1);
    EXPECT_EQ(bucket_of(0.60), 2);
    EXPECT_EQ(bucket_of(0.80), 3);
    EXPECT_EQ(bucket_of(0.9999), 3);
    EXPECT_EQ(bucket_of(1.0), 4);
    EXPECT_EQ(bucket_of(0.7 * 3.0 / 3.0), 2);
}

TEST(RecallDataset, CompleteGraphPerProblem) {
    std::mt19937_64 rng(1);
    Corpus corpus;
    const auto base = synth::java_class(rng, "A");
    corpus["p1"] = {sub("p1", "s1", base), sub("p1", "s2", synth::reformat(base, rng)),
                    sub("p1", "s3", synth::delete_statements(base, 0.3, rng))};
    const auto ds = build_recall_dataset(corpus, {}, MatchConfig{});
    EXPECT_EQ(ds.clones.size(), 3u);
    // The reformatted copy has the same token sequence.
    EXPECT_DOUBLE_EQ(ds.clones[0].lev_simi, 1.0);
    EXPECT_GE(ds.histogram[4], 1u);
    EXPECT_EQ(std::accumulate(ds.histogram.begin(), ds.histogram.end(), std::size_t{0}), 3u);
}

TEST(RecallDataset, HistogramMatchesOracle) {
    std::mt19937_64 rng(8);
    Corpus corpus;
    const auto base = synth::java_class(rng, "V");
    auto& subs = corpus["p"];
    for (int i = 0; i < 20; ++i) {
        std::string v = base;
        if (i % 3 == 1) v = synth::rename(v, rng);
        if (i % 2 == 0) v = synth::delete_statements(v, 0.05 * i, rng);
        if (i % 5 == 4) v = synth::java_class(rng, "V");
        subs.push_back(sub("p", "s" + std::to_string(100 + i), v));
    }
    const auto ds = build_recall_dataset(corpus, {"p"}, MatchConfig{});
    std::array<std::size_t, kBucketCount> expected{};
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        for (std::size_t j = i + 1; j < subs.size(); ++j) {
            const auto& a = subs[i].token_seq;
            const auto& b = subs[j].token_seq;
            const double simi = 1.0 - static_cast<double>(oracle::levenshtein(a, b)) /
                                          static_cast<double>(std::max(a.size(), b.size()));
            const int k = bucket_of(simi);
            if (k < 0) continue;
            ++expected[static_cast<std::size_t>(k)];
            ++labeled;
        }
    }
    EXPECT_EQ(ds.histogram, expected);
    EXPECT_EQ(ds.clones.size(), labeled);
}

TEST(RecallDataset, TooFewSubmissionsWarns) {
    Corpus corpus;
    corpus["p"] = {fake("p", "a", 10)};
    const auto ds = build_recall_dataset(corpus, {"p", "missing"}, MatchConfig{});
    EXPECT_TRUE(ds.clones.empty());
    EXPECT_EQ(ds.warnings.size(), 2u);
}

TEST(TruthFile, RoundTripTruncatesToFourDecimals) {
    const auto a = fake("p", "a", 10);
    const auto b = fake("p", "b", 10);
    const std::vector<LabeledClone> clones = {{&a, &b, 0.39999}, {&a, &b, 1.0}};
    std::stringstream buf;
    write_truth(clones, buf);
    EXPECT_EQ(buf.str(), "p,a,b,0.3999\np,a,b,1.0000\n");
    const auto rows = read_truth(buf);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(bucket_of(rows[0].lev_simi), 0);
    EXPECT_EQ(rows[1].left, "a");
    std::istringstream bad("p,a\n");
    EXPECT_THROW(read_truth(bad), Error);
}

TEST(MatchClones, ExactPairDetectedEitherOrientation) {
    const auto a = fake("p", "a", 10);
    const auto b = fake("p", "b", 20);
    const std::vector<LabeledClone> truth = {{&a, &b, 0.9}};
    const std::vector<ClonePair> straight = {pair_of("p/a.java", 1, 10, "p/b.java", 1, 20)};
    const std::vector<ClonePair> crossed = {pair_of("p/b.java", 1, 20, "p/a.java", 1, 10)};
    EXPECT_EQ(match_clones(straight, truth, MatchConfig{})[3].detected, 1u);
    EXPECT_EQ(match_clones(crossed, truth, MatchConfig{})[3].detected, 1u);
    EXPECT_EQ(match_clones({}, truth, MatchConfig{})[3].total, 1u);
}

TEST(MatchClones, CoverageBoundary) {
    const auto a = fake("p", "a", 100);
    const auto b = fake("p", "b", 100);
    const std::vector<LabeledClone> truth = {{&a, &b, 0.5}};
    const std::vector<ClonePair> at69 = {pair_of("p/a.java", 1, 69, "p/b.java", 1, 100)};
    const std::vector<ClonePair> at70 = {pair_of("p/a.java", 31, 100, "p/b.java", 1, 100)};
    EXPECT_EQ(match_clones(at69, truth, MatchConfig{})[1].detected, 0u);
    EXPECT_EQ(match_clones(at70, truth, MatchConfig{})[1].detected, 1u);
    EXPECT_DOUBLE_EQ(line_coverage({"x", 31, 100, 0}, 100), 0.7);
}

TEST(MatchClones, IneligibleTruthLeavesDenominator) {
    auto a = fake("p", "a", 3);  // below the 6-line minimum
    const auto b = fake("p", "b", 10);
    const std::vector<LabeledClone> truth = {{&a, &b, 1.0}};
    EXPECT_EQ(match_clones({}, truth, MatchConfig{})[4].total, 0u);
}

TEST(MatchClones, RandomAgainstBruteForceAndMonotone) {
    std::mt19937_64 rng(55);
    for (int round = 0; round < 300; ++round) {
        std::vector<Submission> subs;
        const int files = 2 + static_cast<int>(rng() % 8);
        for (int i = 0; i < files; ++i) subs.push_back(fake("p", "s" + std::to_string(i), 4 + rng() % 30));
        std::vector<LabeledClone> truth;
        for (int t = static_cast<int>(rng() % 50); t > 0; --t) {
            const auto i = rng() % subs.size();
            const auto j = rng() % subs.size();
            if (i == j) continue;
            truth.push_back({&subs[i], &subs[j], 0.2 + 0.8 * std::uniform_real_distribution<double>(0, 1)(rng)});
        }
        std::vector<ClonePair> report;
        for (int r = static_cast<int>(rng() % 50); r > 0; --r) {
            const auto& x = subs[rng() % subs.size()];
            const auto& y = subs[rng() % subs.size()];
            const auto xs = static_cast<std::uint32_t>(1 + rng() % x.line_count);
            const auto ys = static_cast<std::uint32_t>(1 + rng() % y.line_count);
            report.push_back(pair_of(default_file_key(x), xs, xs + static_cast<std::uint32_t>(rng() % x.line_count),
                                     default_file_key(y), ys, ys + static_cast<std::uint32_t>(rng() % y.line_count)));
        }
        MatchConfig cfg;
        cfg.coverage = 0.5 + 0.1 * static_cast<double>(rng() % 5);
        const auto got = match_clones(report, truth, cfg);
        const auto want = oracle::match(report, truth, cfg);
        for (std::size_t k = 0; k < kBucketCount; ++k) {
            ASSERT_EQ(got[k].total, want[k].total) << "round " << round;
            ASSERT_EQ(got[k].detected, want[k].detected) << "round " << round;
        }
        if (!report.empty()) {
            auto fewer = report;
            fewer.pop_back();
            const auto less = match_clones(fewer, truth, cfg);
            for (std::size_t k = 0; k < kBucketCount; ++k) EXPECT_LE(less[k].detected, got[k].detected);
        }
    }
}

TEST(RecallDataset, MaterializeAndReload) {
    std::mt19937_64 rng(2);
    const auto& java = fixtures::lang("java");
    Corpus corpus;
    const auto base = synth::java_class(rng, "M");
    corpus["p7"] = {sub("p7", "a", base), sub("p7", "b", synth::rename(base, rng))};
    const auto ds = build_recall_dataset(corpus, {}, MatchConfig{});
    ASSERT_EQ(ds.clones.size(), 1u);
    fixtures::TempDir dir("recall");
    materialize(dir / "corpus", {&corpus["p7"][0], &corpus["p7"][1]});
    {
        std::ofstream truth(dir / "truth.csv");
        write_truth(ds.clones, truth);
    }
    const auto loaded = load_recall_dataset(dir.path(), java);
    ASSERT_EQ(loaded.clones.size(), 1u);
    EXPECT_EQ(loaded.clones[0].left->submission_id, "a");
    EXPECT_EQ(loaded.clones[0].left->line_count, corpus["p7"][0].line_count);
    EXPECT_EQ(bucket_of(loaded.clones[0].lev_simi), bucket_of(ds.clones[0].lev_simi));
}
