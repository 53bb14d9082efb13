#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "polyclone/benchmark/precision.hpp"
#include "synth.hpp"

using namespace polyclone;
using namespace polyclone::bench;

namespace {

ClonePair between(const std::string& a, const std::string& b) {
    ClonePair p;
    p.left = {a, 1, 10, 0};
    p.right = {b, 1, 10, 0};
    return p;
}

std::map<std::string, std::string> descriptions_of(const std::filesystem::path& root, const Corpus& corpus) {
    std::map<std::string, std::string> out;
    for (const auto& [pid, subs] : corpus) out[pid] = read_description(root, pid);
    return out;
}

}  // namespace

TEST(Jaccard, GroupExamples) {
    const auto same = word_set("sum two numbers");
    EXPECT_DOUBLE_EQ(jaccard(same, same), 1.0);
    EXPECT_FALSE(group_of(1.0).has_value());
    EXPECT_EQ(group_of(jaccard(word_set("a b c"), word_set("x y z"))), PrecisionGroup::I);
    const auto a = word_set("w1 w2 w3 w4 w5 w6");
    const auto b = word_set("w1 w2 w3 w7 w8 w9");
    EXPECT_DOUBLE_EQ(jaccard(a, b), 1.0 / 3.0);
    EXPECT_EQ(group_of(jaccard(a, b)), PrecisionGroup::II);
}

TEST(Jaccard, GroupBoundaries) {
    EXPECT_EQ(group_of(0.0), PrecisionGroup::I);
    EXPECT_EQ(group_of(0.2999), PrecisionGroup::I);
    EXPECT_EQ(group_of(0.3), PrecisionGroup::II);
    EXPECT_EQ(group_of(0.6), PrecisionGroup::III);
    EXPECT_EQ(group_of(0.8999), PrecisionGroup::III);
    EXPECT_FALSE(group_of(0.9).has_value());
}

TEST(WordSet, LowercaseAlphanumericWords) {
    EXPECT_EQ(word_set("Given N, print N+1!"), (std::set<std::string>{"given", "n", "print", "1"}));
}

TEST(TrimDescription, CutsAtInputHeading) {
    const auto text = trim_description("Compute the sum.\nTwo lines follow.\nInput\nn m\nOutput\nsum\n");
    EXPECT_EQ(word_set(text), (std::set<std::string>{"compute", "the", "sum", "two", "lines", "follow"}));
    const auto html =
        trim_description("<div><p>Find the &lt;max&gt;.</p><h3>Constraints</h3><p>1 &le; N</p><h3>Input</h3></div>");
    EXPECT_EQ(word_set(html), (std::set<std::string>{"find", "the", "max"}));
}

TEST(ScorePrecision, HandCounts) {
    const ProblemPair pp{"a", "b", 0.1, PrecisionGroup::I};
    const std::vector<ClonePair> all_intra = {between("a/1.java", "a/2.java"), between("b/1.java", "b/3.java")};
    EXPECT_DOUBLE_EQ(score_pair(pp, all_intra).precision(), 1.0);
    const std::vector<ClonePair> mixed = {between("a/1.java", "a/2.java"), between("b/1.java", "b/3.java"),
                                          between("a/3.java", "a/2.java"), between("a/1.java", "b/2.java")};
    const auto s = score_pair(pp, mixed);
    EXPECT_EQ(s.true_positives, 3u);
    EXPECT_EQ(s.false_positives, 1u);
    EXPECT_DOUBLE_EQ(s.precision(), 0.75);
}

TEST(ScorePrecision, EmptyPairsAreFlaggedAndExcluded) {
    std::vector<PairScore> scores = {{{"a", "b", 0.1, PrecisionGroup::I}, 3, 1},
                                     {{"c", "d", 0.2, PrecisionGroup::I}, 0, 0},
                                     {{"e", "f", 0.4, PrecisionGroup::II}, 1, 1},
                                     {{"g", "h", 0.5, PrecisionGroup::II}, 1, 0},
                                     {{"i", "j", 0.45, PrecisionGroup::II}, 2, 0}};
    const auto result = score_precision(scores);
    EXPECT_EQ(result.groups[0].pairs, 2u);
    EXPECT_EQ(result.groups[0].empty_pairs, 1u);
    EXPECT_DOUBLE_EQ(result.groups[0].aggregate, 0.75);
    EXPECT_DOUBLE_EQ(result.groups[0].median, 0.75);
    EXPECT_DOUBLE_EQ(result.groups[1].aggregate, 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(result.groups[1].median, 1.0);
    EXPECT_DOUBLE_EQ(result.overall, 7.0 / 9.0);
}

TEST(BuildPrecision, ReproducibleAndNonOverlapping) {
    fixtures::TempDir dir("precision");
    std::mt19937_64 rng(4);
    synth::write_oj_corpus((dir / "corpus").string(), rng, {16, 3, "java"});
    const auto& java = fixtures::lang("java");
    const auto corpus = load_corpus(dir / "corpus", java, {}, {});
    ASSERT_EQ(corpus.size(), 16u);
    const auto descriptions = descriptions_of(dir / "corpus", corpus);

    PrecisionOptions opts;
    opts.seed = 42;
    opts.pairs_per_group = 3;
    const auto first = build_precision_dataset(corpus, descriptions, opts);
    const auto second = build_precision_dataset(corpus, descriptions, opts);
    ASSERT_EQ(first.pairs.size(), second.pairs.size());
    std::array<std::set<std::string>, 3> used;
    for (std::size_t i = 0; i < first.pairs.size(); ++i) {
        const auto& p = first.pairs[i];
        EXPECT_EQ(p.unit_name(), second.pairs[i].unit_name());
        EXPECT_EQ(group_of(p.jaccard), p.group);
        auto& u = used[static_cast<std::size_t>(p.group)];
        EXPECT_TRUE(u.insert(p.pid_a).second);
        EXPECT_TRUE(u.insert(p.pid_b).second);
    }
    std::array<std::size_t, 3> per_group{};
    for (const auto& p : first.pairs) ++per_group[static_cast<std::size_t>(p.group)];
    for (auto n : per_group) EXPECT_LE(n, 3u);
    EXPECT_GT(per_group[0], 0u);
    EXPECT_GT(per_group[1], 0u);
    EXPECT_GT(per_group[2], 0u);

    materialize_precision(dir / "out", first, corpus);
    std::ifstream csv(dir / "out" / "pairs.csv");
    const auto back = read_pairs_csv(csv);
    ASSERT_EQ(back.size(), first.pairs.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].group, first.pairs[i].group);
        EXPECT_EQ(group_of(back[i].jaccard), back[i].group);
        const auto unit = dir / "out" / std::string(to_string(back[i].group)) / back[i].unit_name();
        EXPECT_TRUE(std::filesystem::is_directory(unit / back[i].pid_a));
        EXPECT_TRUE(std::filesystem::is_directory(unit / back[i].pid_b));
    }

    opts.seed = 43;
    const auto other = build_precision_dataset(corpus, descriptions, opts);
    EXPECT_EQ(other.pairs.size() > 0, true);
}

TEST(BuildPrecision, LengthGapExcludesMismatchedProblems) {
    Corpus corpus;
    auto make = [](const std::string& pid, std::size_t len) {
        Submission s;
        s.problem_id = pid;
        s.submission_id = "s";
        s.token_seq.assign(len, "x");
        return s;
    };
    corpus["a"] = {make("a", 100)};
    corpus["b"] = {make("b", 150)};
    corpus["c"] = {make("c", 129)};
    const std::map<std::string, std::string> desc = {{"a", "one"}, {"b", "two"}, {"c", "three"}};
    PrecisionOptions opts;
    opts.pairs_per_group = 5;
    const auto ds = build_precision_dataset(corpus, desc, opts);
    std::set<std::string> units;
    for (const auto& p : ds.pairs) units.insert(p.unit_name());
    EXPECT_FALSE(units.contains("a__b"));
    EXPECT_TRUE(units.contains("a__c") || units.contains("b__c"));
}
