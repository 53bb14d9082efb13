#include "polyclone/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "polyclone/error.hpp"
#include "polyclone/preprocess.hpp"
#include "polyclone/spt.hpp"
#include "polyclone/tokenbag.hpp"

namespace polyclone {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool interrupted(const RunOptions& options) {
    return options.interrupt != nullptr && options.interrupt->load(std::memory_order_relaxed);
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    }
}

std::string read_raw(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void tally(RunManifest& m, FileRecord record) {
    switch (record.status) {
        case FileStatus::Parsed: ++m.parsed; break;
        case FileStatus::Degraded: ++m.degraded; break;
        case FileStatus::Skipped: ++m.skipped; break;
    }
    m.bags += record.bags;
    if (record.status != FileStatus::Parsed) m.files.push_back(std::move(record));
}

std::string_view status_name(FileStatus s) {
    switch (s) {
        case FileStatus::Parsed: return "parsed";
        case FileStatus::Degraded: return "degraded";
        case FileStatus::Skipped: return "skipped";
    }
    return "parsed";
}

}  // namespace

FileBags process_source(std::string_view raw, std::string relative_path, const LanguageConfig& cfg,
                        const RunOptions& options) {
    FileBags out;
    out.record.path = std::move(relative_path);
    const auto& det = options.detector;
    try {
        const auto text = validate_source(raw);
        const auto stripped = preprocess(text, cfg.comments, PreprocessOptions{false}).text;
        const auto outcome = parse_file(stripped, cfg);
        if (outcome.degraded()) {
            out.record.status = FileStatus::Degraded;
            out.record.reason = "no parse tree; file-level detection only";
            auto bag = file_level_bag(outcome, out.record.path);
            if (det.accepts(0) && bag.size >= det.min_tokens) out.bags.push_back(std::move(bag));
        } else {
            const auto spt = simplify(*outcome.tree, outcome.tokens, SimplifyConfig{det.min_tokens});
            const KeywordSet* keywords = options.keyword_filter && !cfg.keywords.empty() ? &cfg.keywords : nullptr;
            auto bags = generate_bags(spt.root, outcome.tokens, out.record.path, keywords, det.min_tokens);
            std::erase_if(bags, [&](const TokenBag& b) { return !det.accepts(b.segment.granularity); });
            out.bags = std::move(bags);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::AdapterUnavailable) throw;
        if (e.code() == ErrorCode::EmptyAfterFiltering && out.record.status == FileStatus::Degraded) {
            out.record.status = FileStatus::Skipped;
            out.record.reason = "no keyword, identifier or literal tokens";
        } else {
            out.record.status = FileStatus::Skipped;
            out.record.reason = e.what();
        }
        out.bags.clear();
    }
    out.record.bags = out.bags.size();
    return out;
}

std::vector<fs::path> discover_files(const fs::path& root, const LanguageConfig& cfg) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied)) {
        if (entry.is_regular_file() && cfg.matches_extension(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::pair<std::string, std::string>> read_sources(const fs::path& root, const LanguageConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& file : discover_files(root, cfg)) sources.emplace_back(report_path(file, root), read_raw(file));
    return sources;
}

std::string report_path(const fs::path& file, const fs::path& root) {
    return file.lexically_relative(root).generic_string();
}

RunResult run_sources(const std::vector<std::pair<std::string, std::string>>& sources, const LanguageConfig& cfg,
                      const RunOptions& options) {
    const auto start = Clock::now();
    RunResult result;
    result.manifest.language_id = cfg.language_id;
    result.manifest.options = options;

    std::vector<FileBags> processed(sources.size());
    parallel_for(sources.size(), options.jobs, [&](std::size_t i) {
        processed[i] = process_source(sources[i].second, sources[i].first, cfg, options);
    });
    const auto generated = Clock::now();

    std::vector<TokenBag> bags;
    for (auto& p : processed) {
        std::move(p.bags.begin(), p.bags.end(), std::back_inserter(bags));
        tally(result.manifest, std::move(p.record));
    }
    result.pairs = detect(bags, options.detector, options.jobs);
    result.manifest.pairs = result.pairs.size();
    if (options.timing) {
        result.manifest.timing_ms["generate"] = std::chrono::duration<double, std::milli>(generated - start).count();
        result.manifest.timing_ms["detect"] = elapsed_ms(generated);
        result.manifest.timing_ms["total"] = elapsed_ms(start);
    }
    return result;
}

RunResult run_directory(const fs::path& root, const LanguageConfig& cfg, const RunOptions& options,
                        const fs::path& bag_file) {
    const auto start = Clock::now();
    RunResult result;
    auto& manifest = result.manifest;
    manifest.language_id = cfg.language_id;
    manifest.options = options;

    const auto files = discover_files(root, cfg);
    std::set<std::uint32_t> levels;
    {
        std::ofstream out(bag_file, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + bag_file.string());
        BagWriter writer(out, cfg.language_id, options.detector.min_tokens);

        constexpr std::size_t kChunk = 256;
        for (std::size_t begin = 0; begin < files.size(); begin += kChunk) {
            if (interrupted(options)) {
                manifest.interrupted = true;
                break;
            }
            const auto end = std::min(files.size(), begin + kChunk);
            std::vector<FileBags> chunk(end - begin);
            parallel_for(chunk.size(), options.jobs, [&](std::size_t k) {
                const auto& path = files[begin + k];
                auto rel = report_path(path, root);
                try {
                    chunk[k] = process_source(read_raw(path), std::move(rel), cfg, options);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::Io) throw;
                    chunk[k].record = FileRecord{report_path(path, root), FileStatus::Skipped, e.what(), 0};
                }
            });
            for (auto& fb : chunk) {
                for (const auto& bag : fb.bags) {
                    writer.write(bag);
                    levels.insert(bag.segment.granularity);
                }
                tally(manifest, std::move(fb.record));
            }
        }
        writer.finish();
        if (!out) throw Error(ErrorCode::Io, "failed writing " + bag_file.string());
    }
    const auto generated = Clock::now();

    std::vector<ClonePair> pairs;
    if (!manifest.interrupted) {
        for (const auto level : levels) {
            if (interrupted(options)) {
                manifest.interrupted = true;
                break;
            }
            std::ifstream in(bag_file, std::ios::binary);
            const auto group = read_bags(in, nullptr, [level](std::uint32_t g) { return g == level; });
            auto found = detect_group(group, options.detector.theta, options.jobs);
            std::move(found.begin(), found.end(), std::back_inserter(pairs));
        }
    }
    canonicalize(pairs);
    if (options.detector.report_coarsest_only) pairs = suppress_nested(std::move(pairs));
    result.pairs = std::move(pairs);
    manifest.pairs = result.pairs.size();
    if (options.timing) {
        manifest.timing_ms["generate"] = std::chrono::duration<double, std::milli>(generated - start).count();
        manifest.timing_ms["detect"] = elapsed_ms(generated);
        manifest.timing_ms["total"] = elapsed_ms(start);
    }
    return result;
}

int exit_code_for(const RunManifest& m) noexcept {
    if (m.interrupted || m.parsed + m.degraded == 0) return 1;
    if (m.degraded + m.skipped > 0) return 2;
    return 0;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json doc;
    doc["toolVersion"] = tool_version;
    doc["languageId"] = language_id;
    doc["config"] = {
        {"theta", options.detector.theta},
        {"minTokens", options.detector.min_tokens},
        {"granularityMode", options.detector.granularity_label()},
        {"keywordFilter", options.keyword_filter},
        {"reportCoarsestOnly", options.detector.report_coarsest_only},
    };
    doc["files"] = {{"total", total()}, {"parsed", parsed}, {"degraded", degraded}, {"skipped", skipped}};
    doc["bags"] = bags;
    doc["pairs"] = pairs;
    doc["interrupted"] = interrupted;
    if (options.timing) {
        auto& t = doc["timingMs"];
        for (const auto& [phase, ms] : timing_ms) t[phase] = std::round(ms * 1000.0) / 1000.0;
    }
    auto& list = doc["problemFiles"] = nlohmann::ordered_json::array();
    for (const auto& f : files) {
        list.push_back({{"path", f.path}, {"status", status_name(f.status)}, {"reason", f.reason}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace polyclone
