#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyclone/benchmark/corpus.hpp"
#include "polyclone/benchmark/precision.hpp"
#include "polyclone/benchmark/recall.hpp"
#include "polyclone/benchmark/report.hpp"
#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/language.hpp"
#include "polyclone/pipeline.hpp"

namespace fs = std::filesystem;
using namespace polyclone;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

struct CommonOpts {
    std::string lang;
    std::string lang_dir;
    std::size_t min_tokens = 20;
    double theta = 0.7;
    std::string granularity = "0..4";
    bool keyword_filter = false;
    bool all_levels = false;
    unsigned jobs = 0;
    std::uint64_t seed = 0;
    bool no_timing = false;
};

fs::path lang_dir_of(const CommonOpts& o) {
    return o.lang_dir.empty() ? default_language_dir() : fs::path(o.lang_dir);
}

unsigned jobs_of(const CommonOpts& o) {
    if (o.jobs != 0) return o.jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Picks the valid config whose extensions match the most files under root.
LanguageConfig infer_language(const fs::path& root, const fs::path& dir) {
    std::optional<LanguageConfig> best;
    std::size_t best_count = 0;
    for (auto& entry : scan_language_dir(dir)) {
        if (!entry.config) continue;
        const auto n = discover_files(root, *entry.config).size();
        if (n > best_count) {
            best_count = n;
            best = std::move(entry.config);
        }
    }
    if (!best) throw Error(ErrorCode::UnknownLanguage, "no configured language matches any file under " + root.string());
    return *best;
}

RunOptions run_options(const CommonOpts& o) {
    RunOptions opts;
    DetectorConfig base;
    base.theta = o.theta;
    base.min_tokens = o.min_tokens;
    base.report_coarsest_only = !o.all_levels;
    opts.detector = DetectorConfig::with_granularity(base, o.granularity);
    opts.keyword_filter = o.keyword_filter;
    opts.jobs = jobs_of(o);
    opts.timing = !o.no_timing;
    opts.interrupt = &g_interrupted;
    return opts;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_detector) {
    cmd->add_option("--lang", o.lang, "Language id (inferred from extensions when omitted)");
    cmd->add_option("--lang-dir", o.lang_dir, "Directory of language configs")->envname("POLYCLONE_LANG_DIR");
    cmd->add_option("--min-tokens", o.min_tokens, "Minimum tokens per code segment")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
    if (!with_detector) return;
    cmd->add_option("--theta", o.theta, "Overlap similarity threshold")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--granularity", o.granularity, "file | all | N | LO..HI");
    cmd->add_flag("--keyword-filter", o.keyword_filter, "Keep only segments containing a keyword child");
    cmd->add_flag("--all-levels", o.all_levels, "Report nested finer-level pairs too");
    cmd->add_flag("--no-timing", o.no_timing, "Omit timing from the manifest");
}

// ---- detect ---------------------------------------------------------------

int cmd_detect(const CommonOpts& o, const std::string& input, const std::string& out_dir, bool json) {
    const fs::path root(input);
    if (!fs::is_directory(root)) throw Error(ErrorCode::Io, "input is not a directory: " + input);
    const auto cfg = o.lang.empty() ? infer_language(root, lang_dir_of(o)) : find_language(lang_dir_of(o), o.lang);
    const fs::path out(out_dir);
    fs::create_directories(out);

    const auto opts = run_options(o);
    auto result = run_directory(root, cfg, opts, out / "bags.msb");
    {
        std::ofstream report(out / "clones.csv", std::ios::binary);
        if (!report) throw Error(ErrorCode::Io, "cannot write " + (out / "clones.csv").string());
        write_report(result.pairs, report, opts.detector);
    }
    const auto manifest = result.manifest.to_json();
    write_text(out / "manifest.json", manifest);
    if (json) std::cout << manifest;
    std::cerr << "files: " << result.manifest.parsed << " parsed, " << result.manifest.degraded << " degraded, "
              << result.manifest.skipped << " skipped; bags: " << result.manifest.bags
              << "; pairs: " << result.manifest.pairs << "\n";
    if (result.manifest.interrupted) std::cerr << "interrupted; partial results written\n";
    return exit_code_for(result.manifest);
}

// ---- languages ------------------------------------------------------------

int cmd_languages(const CommonOpts& o, bool json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& entry : scan_language_dir(lang_dir_of(o))) {
        nlohmann::ordered_json row;
        row["file"] = entry.path.filename().string();
        if (entry.config) {
            const auto& c = *entry.config;
            row["languageId"] = c.language_id;
            row["grammarRef"] = c.grammar_ref;
            row["extensions"] = c.file_extensions;
            row["keywords"] = c.keywords.size();
            row["status"] = find_adapter(c.grammar_ref) ? "ok" : "adapter unavailable";
        } else {
            row["status"] = "INVALID";
            row["error"] = entry.error;
        }
        doc.push_back(std::move(row));
    }
    if (json) {
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    for (const auto& row : doc) {
        if (row["status"] == "INVALID") {
            std::cout << "INVALID  " << row["file"].get<std::string>() << ": " << row["error"].get<std::string>()
                      << "\n";
            continue;
        }
        std::cout << row["languageId"].get<std::string>() << "  [" << row["grammarRef"].get<std::string>() << "]  ";
        for (const auto& ext : row["extensions"]) std::cout << ext.get<std::string>() << " ";
        std::cout << " " << row["status"].get<std::string>() << "\n";
    }
    return 0;
}

// ---- bench ----------------------------------------------------------------

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

LanguageConfig required_language(const CommonOpts& o) {
    if (o.lang.empty()) throw Error(ErrorCode::MissingField, "--lang is required");
    return find_language(lang_dir_of(o), o.lang);
}

int cmd_build_recall(const CommonOpts& o, const std::string& corpus_dir, const std::string& problems,
                     std::size_t max_per_problem, std::size_t min_lines, const std::string& out_dir) {
    const auto cfg = required_language(o);
    const auto selection = split_list(problems);
    std::vector<std::string> warnings;
    const auto corpus = bench::load_corpus(corpus_dir, cfg, selection, {max_per_problem}, &warnings);
    bench::MatchConfig match;
    match.min_tokens = o.min_tokens;
    match.min_lines = min_lines;
    auto ds = bench::build_recall_dataset(corpus, selection, match);

    const fs::path out(out_dir);
    fs::create_directories(out);
    std::vector<const bench::Submission*> used;
    for (const auto& c : ds.clones) {
        used.push_back(c.left);
        used.push_back(c.right);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    bench::materialize(out / "corpus", used);
    {
        std::ofstream truth(out / "truth.csv", std::ios::binary);
        bench::write_truth(ds.clones, truth);
    }
    nlohmann::ordered_json summary;
    summary["language"] = cfg.language_id;
    summary["problems"] = corpus.size();
    summary["submissions"] = used.size();
    summary["pairs"] = ds.clones.size();
    auto& hist = summary["buckets"] = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < bench::kBucketCount; ++k) hist[bench::kBucketLabels[k]] = ds.histogram[k];
    warnings.insert(warnings.end(), ds.warnings.begin(), ds.warnings.end());
    summary["warnings"] = warnings;
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_build_precision(const CommonOpts& o, const std::string& corpus_dir, std::size_t pairs_per_group,
                        std::size_t max_per_problem, const std::string& out_dir) {
    const auto cfg = required_language(o);
    std::vector<std::string> warnings;
    const auto corpus = bench::load_corpus(corpus_dir, cfg, {}, {max_per_problem}, &warnings);
    std::map<std::string, std::string> descriptions;
    for (const auto& [pid, subs] : corpus) descriptions[pid] = bench::read_description(corpus_dir, pid);
    bench::PrecisionOptions opts;
    opts.seed = o.seed;
    opts.pairs_per_group = pairs_per_group;
    auto ds = bench::build_precision_dataset(corpus, descriptions, opts);
    const fs::path out(out_dir);
    bench::materialize_precision(out, ds, corpus);

    nlohmann::ordered_json summary;
    summary["language"] = cfg.language_id;
    summary["seed"] = o.seed;
    std::array<std::size_t, 3> counts{};
    for (const auto& p : ds.pairs) ++counts[static_cast<std::size_t>(p.group)];
    for (std::size_t g = 0; g < 3; ++g)
        summary["groups"][std::string(bench::to_string(static_cast<bench::PrecisionGroup>(g)))] = counts[g];
    warnings.insert(warnings.end(), ds.warnings.begin(), ds.warnings.end());
    summary["warnings"] = warnings;
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

std::vector<ClonePair> read_report_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return read_report(in);
}

int cmd_score_recall(CommonOpts o, const std::string& dataset, const std::string& report_file, double coverage,
                     const std::string& out_file, bool granularity_set) {
    const auto cfg = required_language(o);
    const fs::path dir(dataset);
    const auto loaded = bench::load_recall_dataset(dir, cfg);

    std::vector<ClonePair> report;
    if (!report_file.empty()) {
        report = read_report_file(report_file);
    } else {
        if (!granularity_set) o.granularity = "file";
        auto result = run_sources(read_sources(dir / "corpus", cfg), cfg, run_options(o));
        report = std::move(result.pairs);
    }
    bench::MatchConfig match;
    match.coverage = coverage;
    match.min_tokens = o.min_tokens;
    const auto score = bench::match_clones(report, loaded.clones, match);
    const auto text = bench::recall_report_json(score, match);
    if (!out_file.empty()) write_text(out_file, text);
    std::cout << text;
    return 0;
}

int cmd_score_precision(CommonOpts o, const std::string& dataset, const std::string& reports_dir,
                        const std::string& out_file, bool granularity_set) {
    const auto cfg = required_language(o);
    const fs::path dir(dataset);
    std::ifstream pairs_in(dir / "pairs.csv", std::ios::binary);
    if (!pairs_in) throw Error(ErrorCode::MissingCorpus, "missing " + (dir / "pairs.csv").string());
    const auto pairs = bench::read_pairs_csv(pairs_in);
    if (!granularity_set) o.granularity = "file";
    const auto opts = run_options(o);

    std::vector<bench::PairScore> scores;
    for (const auto& pair : pairs) {
        const auto rel = fs::path(std::string(bench::to_string(pair.group))) / pair.unit_name();
        std::vector<ClonePair> report;
        if (!reports_dir.empty()) {
            report = read_report_file(fs::path(reports_dir) / rel / "clones.csv");
        } else {
            report = run_sources(read_sources(dir / rel, cfg), cfg, opts).pairs;
        }
        scores.push_back(bench::score_pair(pair, report));
    }
    const auto text = bench::precision_report_json(bench::score_precision(std::move(scores)));
    if (!out_file.empty()) write_text(out_file, text);
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyclone: language-agnostic multi-granularity code clone detector"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommonOpts common;

    auto* detect = app.add_subcommand("detect", "Detect clones in a directory of source files");
    std::string input;
    std::string out_dir = "polyclone-out";
    bool detect_json = false;
    detect->add_option("input", input, "Input directory")->required();
    detect->add_option("--out", out_dir, "Output directory");
    detect->add_option("--seed", common.seed, "Accepted for symmetry; detection is deterministic");
    detect->add_flag("--json", detect_json, "Print the manifest to stdout");
    add_common(detect, common, true);

    auto* languages = app.add_subcommand("languages", "List configured languages");
    bool languages_json = false;
    languages->add_flag("--json", languages_json, "JSON output");
    languages->add_option("--lang-dir", common.lang_dir, "Directory of language configs")
        ->envname("POLYCLONE_LANG_DIR");

    auto* bench_cmd = app.add_subcommand("bench", "Benchmark harness");
    bench_cmd->require_subcommand(1);

    std::string corpus_dir;
    std::string problems;
    std::string dataset;
    std::string report_file;
    std::string reports_dir;
    std::string score_out;
    std::size_t max_per_problem = 300;
    std::size_t min_lines = 6;
    std::size_t pairs_per_group = 30;
    double coverage = 0.7;

    auto* build_recall = bench_cmd->add_subcommand("build-recall", "Build the labeled recall dataset");
    build_recall->add_option("--corpus", corpus_dir, "Corpus root")->required();
    build_recall->add_option("--problems", problems, "Comma-separated problem ids (default all)");
    build_recall->add_option("--max-per-problem", max_per_problem, "Accepted submissions kept per problem");
    build_recall->add_option("--min-lines", min_lines, "Minimum lines per submission");
    build_recall->add_option("--out", out_dir, "Output directory")->required();
    add_common(build_recall, common, false);

    auto* build_precision = bench_cmd->add_subcommand("build-precision", "Build the precision dataset");
    build_precision->add_option("--corpus", corpus_dir, "Corpus root")->required();
    build_precision->add_option("--seed", common.seed, "Sampling seed");
    build_precision->add_option("--pairs-per-group", pairs_per_group, "Problem pairs per similarity group");
    build_precision->add_option("--max-per-problem", max_per_problem, "Accepted submissions kept per problem");
    build_precision->add_option("--out", out_dir, "Output directory")->required();
    add_common(build_precision, common, false);

    auto* score_recall = bench_cmd->add_subcommand("score-recall", "Score recall against a dataset");
    score_recall->add_option("--dataset", dataset, "Dataset directory from build-recall")->required();
    score_recall->add_option("--report", report_file, "Clone report CSV (default: run the built-in detector)");
    score_recall->add_option("--coverage", coverage, "Required line coverage on both files")
        ->check(CLI::Range(0.0, 1.0));
    score_recall->add_option("--out", score_out, "Also write the score JSON here");
    add_common(score_recall, common, true);

    auto* score_precision = bench_cmd->add_subcommand("score-precision", "Score precision against a dataset");
    score_precision->add_option("--dataset", dataset, "Dataset directory from build-precision")->required();
    score_precision->add_option("--reports", reports_dir, "Directory of <group>/<unit>/clones.csv reports");
    score_precision->add_option("--out", score_out, "Also write the score JSON here");
    add_common(score_precision, common, true);

    CLI11_PARSE(app, argc, argv);

    std::signal(SIGINT, on_sigint);
    try {
        if (*detect) return cmd_detect(common, input, out_dir, detect_json);
        if (*languages) return cmd_languages(common, languages_json);
        if (*build_recall)
            return cmd_build_recall(common, corpus_dir, problems, max_per_problem, min_lines, out_dir);
        if (*build_precision)
            return cmd_build_precision(common, corpus_dir, pairs_per_group, max_per_problem, out_dir);
        if (*score_recall)
            return cmd_score_recall(common, dataset, report_file, coverage, score_out,
                                    score_recall->count("--granularity") > 0);
        if (*score_precision)
            return cmd_score_precision(common, dataset, reports_dir, score_out,
                                       score_precision->count("--granularity") > 0);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
