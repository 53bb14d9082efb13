// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.
//
//   polyclone_acceptance [--only N]... [--loc N]

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyclone/benchmark/precision.hpp"
#include "polyclone/benchmark/recall.hpp"
#include "polyclone/benchmark/sequence.hpp"
#include "polyclone/detector.hpp"
#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/pipeline.hpp"
#include "polyclone/preprocess.hpp"
#include "polyclone/spt.hpp"
#include "polyclone/tokenbag.hpp"
#include "synth.hpp"

namespace fs = std::filesystem;
using namespace polyclone;

namespace {

// ---- pinned tolerances -----------------------------------------------------

constexpr double kTheta = 0.7;
constexpr double kCoverage = 0.7;
constexpr double kC1TimeLimitSeconds = 10.0;
constexpr std::size_t kC1Corpora = 50;
constexpr std::size_t kC1MaxBags = 200;
constexpr std::size_t kC2Trees = 500;
constexpr std::size_t kC2MaxNodes = 12;
constexpr std::size_t kC3Pairs = 10000;
constexpr std::size_t kC4SeedFiles = 100;
constexpr std::size_t kC5Cases = 10000;
constexpr std::size_t kC6Rounds = 500;
constexpr std::size_t kC6MaxPairs = 50;
constexpr double kC8TimeLimitSeconds = 300.0;
constexpr long kC8MemoryLimitKiB = 8L * 1024 * 1024;
constexpr std::size_t kC8SubCorpusLoc = 10000;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failure notes; the first few are kept for the summary line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    [[nodiscard]] bool ok() const noexcept { return failures_ == 0; }
    [[nodiscard]] Outcome outcome(std::string summary) const {
        if (failures_ > 0) {
            summary += "; " + std::to_string(failures_) + " failure(s): ";
            for (std::size_t i = 0; i < notes_.size(); ++i) summary += (i ? " | " : "") + notes_[i];
        }
        return {ok(), std::move(summary)};
    }

private:
    std::size_t failures_ = 0;
    std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int precision = 2) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(precision);
    out << v;
    return out.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

int run_cli(const std::string& args, const fs::path& log) {
    return fixtures::run(std::string("\"") + POLYCLONE_CLI_PATH + "\" " + args + " > " + q(log) + " 2>&1");
}

std::string pair_text(const ClonePair& p) {
    std::ostringstream out;
    out << p.left.file << ":" << p.left.start_line << "-" << p.left.end_line << " ~ " << p.right.file << ":"
        << p.right.start_line << "-" << p.right.end_line << " g" << p.granularity;
    return out.str();
}

bool same_pairs(const std::vector<ClonePair>& a, const std::vector<ClonePair>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].left != b[i].left || a[i].right != b[i].right || a[i].granularity != b[i].granularity) return false;
        if (std::abs(a[i].similarity - b[i].similarity) > 1e-12) return false;
    }
    return true;
}

DetectorConfig raw_all_levels(double theta) {
    DetectorConfig cfg;
    cfg.theta = theta;
    cfg.min_tokens = 1;
    cfg.mode = GranularityMode::All;
    cfg.report_coarsest_only = false;
    return cfg;
}

// Directly counted retained-token multiset of a whole source file.
std::map<std::string, std::uint32_t> file_multiset(const std::string& raw, const LanguageConfig& cfg) {
    const auto text = preprocess(validate_source(raw), cfg.comments).text;
    std::map<std::string, std::uint32_t> m;
    for (const auto& t : parse_file(text, cfg).tokens) {
        if (t.category != TokenCategory::Other) ++m[t.text];
    }
    return m;
}

double multiset_similarity(const std::map<std::string, std::uint32_t>& a,
                           const std::map<std::string, std::uint32_t>& b) {
    std::uint32_t sa = 0, sb = 0, shared = 0;
    for (const auto& kv : a) sa += kv.second;
    for (const auto& kv : b) sb += kv.second;
    for (const auto& [text, count] : a) {
        auto it = b.find(text);
        if (it != b.end()) shared += std::min(count, it->second);
    }
    const auto larger = std::max(sa, sb);
    return larger == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(larger);
}

// ---- 1: detection oracle equivalence ---------------------------------------

Outcome criterion1() {
    Check check;
    std::mt19937_64 rng(101);
    double detect_seconds = 0.0;
    std::size_t total_pairs = 0;
    std::size_t total_bags = 0;
    for (std::size_t corpus = 0; corpus < kC1Corpora; ++corpus) {
        const auto n = 2 + rng() % (kC1MaxBags - 1);
        const auto levels = 1 + static_cast<std::uint32_t>(rng() % 5);
        const auto alphabet = 6 + rng() % 40;
        const auto max_size = 5 + rng() % 60;
        std::vector<TokenBag> bags;
        for (std::size_t i = 0; i < n; ++i) {
            bags.push_back(oracle::random_bag(rng, "f" + std::to_string(rng() % 30), static_cast<std::uint32_t>(1 + rng() % 400),
                                              static_cast<std::uint32_t>(rng() % levels), alphabet, max_size));
        }
        // Plant near-duplicates so every corpus has real clones.
        for (std::size_t k = 0; k < n / 10; ++k) {
            auto copy = bags[rng() % bags.size()];
            copy.segment.file = "dup" + std::to_string(k);
            if (!copy.counts.empty() && rng() % 2 == 0) {
                copy.counts.back().second += 1;
                copy.size += 1;
            }
            bags.push_back(std::move(copy));
        }
        total_bags += bags.size();
        const double theta = 0.5 + 0.05 * static_cast<double>(rng() % 11);

        const auto start = std::chrono::steady_clock::now();
        const auto raw = detect(bags, raw_all_levels(theta));
        auto coarsest_cfg = raw_all_levels(theta);
        coarsest_cfg.report_coarsest_only = true;
        const auto reported = detect(bags, coarsest_cfg);
        detect_seconds += seconds_since(start);

        const auto expected_raw = oracle::all_pairs(bags, theta);
        auto expected_reported = oracle::suppress(expected_raw);
        canonicalize(expected_reported);
        total_pairs += raw.size();
        check.expect(same_pairs(raw, expected_raw),
                     "corpus " + std::to_string(corpus) + ": raw " + std::to_string(raw.size()) + " vs oracle " +
                         std::to_string(expected_raw.size()));
        check.expect(same_pairs(reported, expected_reported),
                     "corpus " + std::to_string(corpus) + ": reported set differs after suppression");
    }
    check.expect(detect_seconds < kC1TimeLimitSeconds, "detection took " + fmt(detect_seconds) + " s");
    return check.outcome(std::to_string(kC1Corpora) + " corpora, " + std::to_string(total_bags) + " bags, " +
                         std::to_string(total_pairs) + " raw pairs equal to brute force; detect time " +
                         fmt(detect_seconds) + " s (limit " + fmt(kC1TimeLimitSeconds, 0) + " s)");
}

// ---- 2: simplification equivalence -----------------------------------------

ParseNode inner(std::string rule, std::vector<ParseNode> children) {
    ParseNode n;
    n.rule = std::move(rule);
    n.children = std::move(children);
    n.span = {n.children.front().span.begin, n.children.back().span.end};
    return n;
}

Outcome criterion2() {
    Check check;
    std::mt19937_64 rng(202);
    std::size_t nodes = 0;
    for (std::size_t i = 0; i < kC2Trees; ++i) {
        const auto tree = oracle::random_tree(rng, kC2MaxNodes);
        const auto tokens = oracle::random_tokens(rng, tree.span.length());
        const std::size_t m = 1 + rng() % 4;
        const auto spt = simplify(tree, tokens, {m});
        const auto got = oracle::flatten(spt.root);
        nodes += got.size();
        check.expect(got == oracle::simplify(tree, m), "tree " + std::to_string(i) + " differs");
    }

    // The figure: 0 -> 1 -> {2, 3}; 2 -> {4, 5}; 3 -> {6, 7, 8}; 7 -> {9, 10}.
    const auto n2 = inner("2", {ParseNode::leaf(0), ParseNode::leaf(1)});
    const auto n7 = inner("7", {ParseNode::leaf(3), ParseNode::leaf(4)});
    const auto n3 = inner("3", {ParseNode::leaf(2), n7, ParseNode::leaf(5)});
    const auto n0 = inner("0", {inner("1", {n2, n3})});
    std::vector<Token> tokens(6, Token{TokenCategory::Identifier, "t", 1, 1});
    const auto spt = simplify(n0, tokens, {2});
    std::vector<std::pair<std::string, std::uint32_t>> shape;
    std::function<void(const SptNode&, const std::string&)> walk = [&](const SptNode& n, const std::string& top) {
        shape.emplace_back(top, n.granularity);
        for (const auto& c : n.children) walk(c, c.rule);
    };
    walk(spt.root, "0");
    const std::vector<std::pair<std::string, std::uint32_t>> expected = {{"0", 0}, {"2", 1}, {"3", 1}, {"7", 2}};
    check.expect(shape == expected, "figure example does not give {0,2,3,7}");
    check.expect(max_granularity(spt.root) == 2, "figure example max granularity is not 2");
    return check.outcome(std::to_string(kC2Trees) + " random trees (<= " + std::to_string(kC2MaxNodes) +
                         " nodes, " + std::to_string(nodes) + " SPT nodes) equal the reference; figure example "
                         "gives {0,2,3,7} with max granularity 2");
}

// ---- 3: overlap similarity properties --------------------------------------

Outcome criterion3() {
    Check check;
    std::mt19937_64 rng(303);
    std::size_t containment_cases = 0;
    for (std::size_t i = 0; i < kC3Pairs; ++i) {
        auto a = oracle::random_bag(rng, "a", 1, 0, 3 + rng() % 10, 1 + rng() % 20);
        TokenBag b;
        if (i % 4 == 0) {
            // b is a superset of a
            std::vector<std::string> texts;
            for (const auto& [t, c] : a.counts) texts.insert(texts.end(), c, t);
            for (auto extra = rng() % 6; extra > 0; --extra) texts.push_back("t" + std::to_string(rng() % 12));
            b = make_bag({"b", 1, 2, 0}, texts);
            ++containment_cases;
            check.expect(std::abs(overlap_similarity(a, b) - static_cast<double>(a.size) / b.size) < 1e-12,
                         "containment bound violated");
        } else {
            b = oracle::random_bag(rng, "b", 1, 0, 3 + rng() % 10, 1 + rng() % 20);
        }
        const double ab = overlap_similarity(a, b);
        const double ba = overlap_similarity(b, a);
        check.expect(ab == ba, "asymmetric similarity");
        check.expect(ab >= 0.0 && ab <= 1.0, "similarity out of bounds");
        check.expect((ab == 1.0) == (a.counts == b.counts), "similarity 1 does not coincide with multiset equality");
        check.expect(ab == oracle::similarity(a, b), "differs from the hand-counted oracle");

        // Threshold monotonicity through the detector itself.
        const double t1 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double t2 = std::uniform_real_distribution<double>(t1, 1.0)(rng);
        const std::vector<TokenBag> two = {a, b};
        const auto loose = detect(two, raw_all_levels(t1));
        const auto strict = detect(two, raw_all_levels(t2));
        check.expect(strict.size() <= loose.size(), "raising theta added a pair");
    }

    const auto x = make_bag({"x", 1, 1, 0}, {"x", "y", "z", "w", "v"});
    const auto y = make_bag({"y", 1, 1, 0}, {"x", "y", "z", "p", "q", "r"});
    const double spot = overlap_similarity(x, y);
    check.expect(spot == 0.5 && oracle::intersection(x, y) == 3, "spot value is " + fmt(spot, 4));
    return check.outcome(std::to_string(kC3Pairs) + " random bag pairs (" + std::to_string(containment_cases) +
                         " containment cases) satisfy symmetry, bounds, identity, containment and threshold "
                         "monotonicity; spot value 3/6 = " + fmt(spot, 4));
}

// ---- 4: injected-clone recall ----------------------------------------------

Outcome criterion4() {
    Check check;
    const auto& java = fixtures::lang("java");
    std::mt19937_64 rng(404);
    std::vector<std::pair<std::string, std::string>> sources;
    struct Injected {
        std::string kind, seed_file, variant_file;
        double overlap = 0.0;
    };
    std::vector<Injected> injected;
    for (std::size_t i = 0; i < kC4SeedFiles; ++i) {
        const auto name = "Seed" + std::to_string(i);
        const auto seed = synth::java_class(rng, name, {2, 5, 3, 8, 400});
        const auto seed_file = "seed/" + name + ".java";
        sources.emplace_back(seed_file, seed);
        const double k = 0.05 + 0.05 * static_cast<double>(rng() % 6);
        const std::vector<std::pair<std::string, std::string>> variants = {
            {"T1", synth::reformat(seed, rng)},
            {"T2", i % 2 == 0 ? synth::rename(seed, rng)
                              : synth::rename(seed, rng, false, 0.05 * static_cast<double>(rng() % 7))},
            {"T3", synth::delete_statements(seed, k, rng)}};
        for (const auto& [kind, text] : variants) {
            const auto file = kind + "/" + name + ".java";
            sources.emplace_back(file, text);
            injected.push_back({kind, seed_file, file, multiset_similarity(file_multiset(seed, java), file_multiset(text, java))});
        }
    }
    std::sort(sources.begin(), sources.end());
    RunOptions opts;
    opts.timing = false;
    opts.detector.theta = kTheta;
    const auto result = run_sources(sources, java, opts);
    std::set<std::pair<std::string, std::string>> file_pairs;
    for (const auto& p : result.pairs) {
        if (p.granularity == 0) file_pairs.insert(std::minmax(p.left.file, p.right.file));
    }

    std::map<std::string, std::pair<std::size_t, std::size_t>> eligible_found;  // kind -> (eligible, found)
    for (const auto& inj : injected) {
        const bool must_find = inj.kind == "T1" || inj.overlap >= kTheta;
        if (inj.kind == "T1") check.expect(inj.overlap == 1.0, "T1 variant changed the bag of " + inj.seed_file);
        if (!must_find) continue;
        auto& [eligible, found] = eligible_found[inj.kind];
        ++eligible;
        const bool hit = file_pairs.contains(std::minmax(inj.seed_file, inj.variant_file));
        if (hit) ++found;
        check.expect(hit, inj.kind + " pair " + inj.seed_file + " missed (overlap " + fmt(inj.overlap, 3) + ")");
    }
    std::string summary = "100 seeds, theta " + fmt(kTheta, 1) + ":";
    for (const auto* kind : {"T1", "T2", "T3"}) {
        const auto [eligible, found] = eligible_found[kind];
        summary += std::string(" ") + kind + " " + std::to_string(found) + "/" + std::to_string(eligible);
    }
    summary += " (T2/T3 counted where the directly computed overlap >= theta); zero false negatives required";
    return check.outcome(summary);
}

// ---- 5: LevTS / LevSimi -----------------------------------------------------

Outcome criterion5() {
    Check check;
    std::mt19937_64 rng(505);
    auto random_seq = [&](std::size_t max_len) {
        std::vector<std::string> s(rng() % (max_len + 1));
        for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng() % 4));
        return s;
    };
    for (std::size_t i = 0; i < kC5Cases; ++i) {
        const auto a = random_seq(10);
        const auto b = random_seq(10);
        const auto c = random_seq(10);
        const auto ab = bench::lev_ts(a, b);
        check.expect(ab == oracle::levenshtein(a, b), "lev_ts differs from the DP oracle");
        check.expect(ab == bench::lev_ts(b, a), "lev_ts not symmetric");
        check.expect((ab == 0) == (a == b), "identity of indiscernibles violated");
        check.expect(bench::lev_ts(a, c) <= ab + bench::lev_ts(b, c), "triangle inequality violated");
        check.expect(ab <= std::max(a.size(), b.size()), "upper bound violated");
    }
    const std::vector<std::string> xyz = {"x", "y", "z"}, xz = {"x", "z"};
    check.expect(bench::lev_ts(xyz, xz) == 1, "[x,y,z] vs [x,z] is not 1");

    const auto& java = fixtures::lang("java");
    std::size_t renamed = 0;
    for (int i = 0; i < 50; ++i) {
        const auto src = synth::java_class(rng, "Ren");
        const auto a = bench::normalize_seq(parse_file(src, java).tokens);
        const auto b = bench::normalize_seq(parse_file(synth::rename(src, rng, false), java).tokens);
        const double simi = bench::lev_simi(a, b);
        check.expect(simi == 1.0, "T2 rename scored " + fmt(simi, 4));
        ++renamed;
    }
    return check.outcome(std::to_string(kC5Cases) + " random sequence triples agree with the DP oracle and satisfy "
                         "the metric axioms; " + std::to_string(renamed) +
                         " identifier-renamed files score levSimi 1.0");
}

// ---- 6: clone matcher -------------------------------------------------------

Outcome criterion6() {
    Check check;
    std::mt19937_64 rng(606);
    auto fake = [](const std::string& sid, std::uint32_t lines) {
        bench::Submission s;
        s.problem_id = "p";
        s.submission_id = sid;
        s.extension = ".java";
        s.line_count = lines;
        s.retained_tokens = 100;
        return s;
    };
    auto pair_of = [](const std::string& a, std::uint32_t as, std::uint32_t ae, const std::string& b, std::uint32_t bs,
                      std::uint32_t be) {
        ClonePair p;
        p.left = {a, as, ae, 0};
        p.right = {b, bs, be, 0};
        return p;
    };
    bench::MatchConfig cfg;
    cfg.coverage = kCoverage;
    std::size_t truths = 0;
    for (std::size_t round = 0; round < kC6Rounds; ++round) {
        std::vector<bench::Submission> subs;
        const auto files = 2 + rng() % 10;
        for (std::size_t i = 0; i < files; ++i) subs.push_back(fake("s" + std::to_string(i), static_cast<std::uint32_t>(3 + rng() % 40)));
        std::vector<bench::LabeledClone> truth;
        for (auto n = rng() % (kC6MaxPairs + 1); n > 0; --n) {
            const auto i = rng() % files, j = rng() % files;
            if (i != j) truth.push_back({&subs[i], &subs[j], std::uniform_real_distribution<double>(0.1, 1.0)(rng)});
        }
        std::vector<ClonePair> report;
        for (auto n = rng() % (kC6MaxPairs + 1); n > 0; --n) {
            const auto& x = subs[rng() % files];
            const auto& y = subs[rng() % files];
            const auto xs = static_cast<std::uint32_t>(1 + rng() % x.line_count);
            const auto ys = static_cast<std::uint32_t>(1 + rng() % y.line_count);
            report.push_back(pair_of(bench::default_file_key(x), xs, xs + static_cast<std::uint32_t>(rng() % x.line_count),
                                     bench::default_file_key(y), ys, ys + static_cast<std::uint32_t>(rng() % y.line_count)));
        }
        const auto got = bench::match_clones(report, truth, cfg);
        const auto want = oracle::match(report, truth, cfg);
        for (std::size_t k = 0; k < bench::kBucketCount; ++k) {
            check.expect(got[k].total == want[k].total && got[k].detected == want[k].detected,
                         "round " + std::to_string(round) + " bucket " + bench::kBucketLabels[k]);
        }
        truths += truth.size();
    }

    const auto a = fake("a", 100), b = fake("b", 100);
    const std::vector<bench::LabeledClone> truth = {{&a, &b, 0.9}};
    const std::vector<ClonePair> at69 = {pair_of("p/a.java", 1, 69, "p/b.java", 1, 100)};
    const std::vector<ClonePair> at70 = {pair_of("p/a.java", 1, 70, "p/b.java", 1, 100)};
    check.expect(bench::match_clones(at69, truth, cfg)[3].detected == 0, "69% coverage was matched");
    check.expect(bench::match_clones(at70, truth, cfg)[3].detected == 1, "70% coverage was not matched");
    return check.outcome(std::to_string(kC6Rounds) + " randomized report/truth sets (" + std::to_string(truths) +
                         " truth pairs) equal the brute-force matcher; 69% not matched, 70% matched at coverage " +
                         fmt(kCoverage, 1));
}

// ---- 7: precision dataset reproducibility ----------------------------------

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        const auto rel = fs::relative(e.path(), root).generic_string();
        files[rel] = e.is_regular_file() ? fixtures::read_file(e.path()) : std::string("<dir>");
    }
    return files;
}

std::set<std::string> words_of(const std::string& text) {
    std::set<std::string> out;
    std::string cur;
    for (char c : text + " ") {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.insert(cur);
            cur.clear();
        }
    }
    return out;
}

Outcome criterion7() {
    Check check;
    fixtures::TempDir dir("acc7");
    std::mt19937_64 rng(707);
    synth::write_oj_corpus((dir / "corpus").string(), rng, {40, 3, "Java"});
    const auto corpus = q(dir / "corpus");
    for (const char* out : {"run1", "run2"}) {
        const int rc = run_cli("bench build-precision --lang java --seed 2024 --pairs-per-group 30 --corpus " + corpus +
                                   " --out " + q(dir / out),
                               dir / (std::string(out) + ".log"));
        check.expect(rc == 0, std::string("build-precision exited ") + std::to_string(rc));
    }
    if (!check.ok()) return check.outcome("build-precision failed");
    const auto first = snapshot(dir / "run1");
    const auto second = snapshot(dir / "run2");
    check.expect(first == second, "the two runs differ");

    std::ifstream csv(dir / "run1" / "pairs.csv");
    const auto pairs = bench::read_pairs_csv(csv);
    std::array<std::size_t, 3> per_group{};
    for (const auto& p : pairs) {
        const auto wa = words_of(bench::trim_description(bench::read_description(dir / "corpus", p.pid_a)));
        const auto wb = words_of(bench::trim_description(bench::read_description(dir / "corpus", p.pid_b)));
        std::size_t shared = 0;
        for (const auto& w : wa) shared += wb.count(w);
        const double j = static_cast<double>(shared) / static_cast<double>(wa.size() + wb.size() - shared);
        const char* expected = j < 0.3 ? "I" : j < 0.6 ? "II" : j < 0.9 ? "III" : "none";
        check.expect(bench::to_string(p.group) == expected,
                     p.unit_name() + " jaccard " + fmt(j, 4) + " filed under " + std::string(bench::to_string(p.group)));
        ++per_group[static_cast<std::size_t>(p.group)];
    }
    check.expect(!pairs.empty(), "no pairs sampled");
    return check.outcome("two seeded runs byte-identical over " + std::to_string(first.size()) + " paths; " +
                         std::to_string(pairs.size()) + " pairs (I " + std::to_string(per_group[0]) + ", II " +
                         std::to_string(per_group[1]) + ", III " + std::to_string(per_group[2]) +
                         ") fall in [0,0.3)/[0.3,0.6)/[0.6,0.9) by recomputed Jaccard");
}

// ---- 8: scalability ---------------------------------------------------------

Outcome criterion8(std::size_t target_loc) {
    Check check;
    fixtures::TempDir dir("acc8");
    const auto corpus = dir / "corpus";
    std::mt19937_64 rng(808);
    synth::JavaOptions opts{2, 6, 3, 8, 3000};
    std::size_t loc = 0, files = 0, sub_loc = 0;
    std::set<std::string> sub_files;
    std::vector<std::string> recent;
    while (loc < target_loc) {
        const auto pkg = "pkg" + std::to_string(files / 500);
        const auto name = "C" + std::to_string(files);
        std::string src;
        // One file in ten is a clone variant of a recent file.
        if (!recent.empty() && files % 10 == 9) {
            const auto& base = recent[rng() % recent.size()];
            switch (rng() % 3) {
                case 0: src = synth::reformat(base, rng); break;
                case 1: src = synth::rename(base, rng); break;
                default: src = synth::delete_statements(base, 0.15, rng); break;
            }
        } else {
            src = synth::java_class(rng, name, opts);
            recent.push_back(src);
            if (recent.size() > 50) recent.erase(recent.begin());
        }
        const auto rel = pkg + "/" + name + ".java";
        fixtures::write_file(corpus / rel, src);
        const auto lines = static_cast<std::size_t>(std::count(src.begin(), src.end(), '\n'));
        loc += lines;
        if (sub_loc < kC8SubCorpusLoc) {
            sub_loc += lines;
            sub_files.insert(rel);
        }
        ++files;
    }

    const auto start = std::chrono::steady_clock::now();
    const int rc = run_cli("detect " + q(corpus) + " --lang java --no-timing --out " + q(dir / "out"), dir / "detect.log");
    const double elapsed = seconds_since(start);
    rusage usage{};
    getrusage(RUSAGE_CHILDREN, &usage);
    const long peak_kib = usage.ru_maxrss;
    check.expect(rc == 0, "detect exited " + std::to_string(rc) + ": " + fixtures::read_file(dir / "detect.log"));
    check.expect(elapsed <= kC8TimeLimitSeconds, "took " + fmt(elapsed, 1) + " s");
    check.expect(peak_kib < kC8MemoryLimitKiB, "peak RSS " + std::to_string(peak_kib / 1024) + " MiB");
    if (rc != 0) return check.outcome("detect failed");

    // Sub-corpus: bags of its files from the full run, checked against the
    // brute-force detector plus brute-force suppression.
    std::ifstream bag_in(dir / "out" / "bags.msb");
    auto bags = read_bags(bag_in);
    const auto total_bags = bags.size();
    std::erase_if(bags, [&](const TokenBag& b) { return !sub_files.contains(b.segment.file); });
    auto expected = oracle::suppress(oracle::all_pairs(bags, kTheta));
    canonicalize(expected);
    std::ifstream report_in(dir / "out" / "clones.csv");
    auto reported = read_report(report_in);
    const auto total_pairs = reported.size();
    std::erase_if(reported, [&](const ClonePair& p) {
        return !sub_files.contains(p.left.file) || !sub_files.contains(p.right.file);
    });
    bool equal = reported.size() == expected.size();
    for (std::size_t i = 0; equal && i < reported.size(); ++i) {
        equal = reported[i].left == expected[i].left && reported[i].right == expected[i].right &&
                std::abs(reported[i].similarity - expected[i].similarity) < 5e-5;
    }
    check.expect(equal, "sub-corpus pairs differ from oracle (" + std::to_string(reported.size()) + " vs " +
                            std::to_string(expected.size()) + ")");
    return check.outcome(std::to_string(loc) + " LOC in " + std::to_string(files) + " files: " +
                         std::to_string(total_bags) + " bags, " + std::to_string(total_pairs) + " pairs in " +
                         fmt(elapsed, 1) + " s (limit " + fmt(kC8TimeLimitSeconds, 0) + " s), peak RSS " +
                         std::to_string(peak_kib / 1024) + " MiB (limit 8192 MiB); " + std::to_string(sub_loc) +
                         "-LOC sub-corpus (" + std::to_string(bags.size()) + " bags, " +
                         std::to_string(expected.size()) + " pairs) equals the oracle");
}

// ---- 9: degraded mode -------------------------------------------------------

Outcome criterion9() {
    Check check;
    const std::string garbage =
        "}}} ))) class class ;; @@ %% ) ( ] [ alpha beta gamma delta ))) (( epsilon zeta eta theta iota kappa "
        "lambda mu nu xi omicron pi rho sigma tau upsilon phi chi psi omega )))\n";
    fixtures::TempDir dir("acc9");
    std::mt19937_64 rng(909);
    for (int i = 0; i < 4; ++i) {
        const auto name = "Ok" + std::to_string(i);
        fixtures::write_file(dir / ("one/" + name + ".java"), synth::java_class(rng, name));
        fixtures::write_file(dir / ("twins/" + name + ".java"), synth::java_class(rng, name));
    }
    fixtures::write_file(dir / "one/Broken.java", garbage);
    fixtures::write_file(dir / "twins/BrokenA.java", garbage);
    fixtures::write_file(dir / "twins/BrokenB.java", garbage);

    auto bags_of = [&](const fs::path& out, const std::string& file) {
        std::ifstream in(out / "bags.msb");
        std::vector<TokenBag> found;
        for (auto& b : read_bags(in)) {
            if (b.segment.file == file) found.push_back(std::move(b));
        }
        return found;
    };

    const int rc_one = run_cli("detect " + q(dir / "one") + " --lang java --out " + q(dir / "out1"), dir / "log1");
    check.expect(rc_one == 2, "single unparsable file: exit " + std::to_string(rc_one));
    const auto manifest = nlohmann::json::parse(fixtures::read_file(dir / "out1" / "manifest.json"));
    check.expect(manifest["files"]["degraded"] == 1, "manifest does not show one degraded file");
    const auto broken = bags_of(dir / "out1", "Broken.java");
    check.expect(broken.size() == 1 && broken[0].segment.granularity == 0,
                 "degraded file has " + std::to_string(broken.size()) + " bags, expected one file-level bag");

    const int rc_twins = run_cli("detect " + q(dir / "twins") + " --lang java --out " + q(dir / "out2"), dir / "log2");
    check.expect(rc_twins == 2, "twins: exit " + std::to_string(rc_twins));
    std::ifstream report(dir / "out2" / "clones.csv");
    const auto pairs = read_report(report);
    const bool twin_pair = std::any_of(pairs.begin(), pairs.end(), [](const ClonePair& p) {
        return p.left.file == "BrokenA.java" && p.right.file == "BrokenB.java" && p.granularity == 0 &&
               p.similarity == 1.0;
    });
    check.expect(twin_pair, "unparsable twins not reported as a file-level clone");
    for (const auto& p : pairs) {
        if (p.left.file.rfind("Broken", 0) == 0 || p.right.file.rfind("Broken", 0) == 0) {
            check.expect(p.granularity == 0, "degraded file paired at granularity " + std::to_string(p.granularity));
        }
    }
    return check.outcome("exit " + std::to_string(rc_one) + " with one unparsable file (file-level bag only); "
                         "unparsable twins reported as a file-level clone with similarity 1.0, exit " +
                         std::to_string(rc_twins));
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    std::size_t loc = 1'000'000;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only.insert(std::atoi(argv[++i]));
        } else if (arg == "--loc" && i + 1 < argc) {
            loc = static_cast<std::size_t>(std::atoll(argv[++i]));
        } else {
            std::cerr << "usage: polyclone_acceptance [--only N]... [--loc N]\n";
            return 64;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Detection equals brute-force oracle", criterion1},
        {"Parse-tree simplification equals reference", criterion2},
        {"Overlap similarity properties", criterion3},
        {"Injected-clone recall", criterion4},
        {"LevTS/LevSimi correctness", criterion5},
        {"Clone matcher equals brute force", criterion6},
        {"Precision dataset reproducibility", criterion7},
        {"Scalability smoke", [loc] { return criterion8(loc); }},
        {"Degraded-mode contract", criterion9},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.contains(id)) continue;
        Outcome outcome;
        const auto start = std::chrono::steady_clock::now();
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        all = all && outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first << " -- "
                  << outcome.detail << " [" << fmt(seconds_since(start), 1) << " s]" << std::endl;
    }
    return all ? 0 : 1;
}
