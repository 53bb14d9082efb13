#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyclone/detector.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/language.hpp"
#include "polyclone/segment.hpp"

namespace polyclone {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunOptions {
    DetectorConfig detector;
    bool keyword_filter = false;
    unsigned jobs = 1;
    bool timing = true;
    /// Set asynchronously (e.g. from a signal handler) to stop early.
    const std::atomic<bool>* interrupt = nullptr;
};

enum class FileStatus : std::uint8_t { Parsed, Degraded, Skipped };

struct FileRecord {
    std::string path;  // relative to the input root, '/' separated
    FileStatus status = FileStatus::Parsed;
    std::string reason;
    std::size_t bags = 0;
};

struct RunManifest {
    std::string tool_version{kToolVersion};
    std::string language_id;
    RunOptions options;
    std::size_t parsed = 0;
    std::size_t degraded = 0;
    std::size_t skipped = 0;
    std::size_t bags = 0;
    std::size_t pairs = 0;
    bool interrupted = false;
    std::map<std::string, double> timing_ms;
    std::vector<FileRecord> files;

    [[nodiscard]] std::size_t total() const noexcept { return parsed + degraded + skipped; }
    [[nodiscard]] std::string to_json() const;
};

/// Bags of one file, after the granularity-mode filter.
struct FileBags {
    FileRecord record;
    std::vector<TokenBag> bags;
};

/// Full per-file front half: validate, strip comments (line numbers kept),
/// parse, simplify, generate bags. Degraded files yield only the file bag.
FileBags process_source(std::string_view raw, std::string relative_path,
                        const LanguageConfig& cfg, const RunOptions& options);

/// Source files under root matching the language's extensions, sorted.
std::vector<std::filesystem::path> discover_files(const std::filesystem::path& root,
                                                  const LanguageConfig& cfg);

/// Reads every matching file under root as (report path, raw text).
std::vector<std::pair<std::string, std::string>> read_sources(const std::filesystem::path& root,
                                                              const LanguageConfig& cfg);

/// Relative, '/'-separated path used in reports.
std::string report_path(const std::filesystem::path& file, const std::filesystem::path& root);

struct RunResult {
    RunManifest manifest;
    std::vector<ClonePair> pairs;
};

/// Runs parse → simplify → bags → detect over in-memory sources
/// (relative path → raw text). Used by the benchmark harness and tests.
RunResult run_sources(const std::vector<std::pair<std::string, std::string>>& sources,
                      const LanguageConfig& cfg, const RunOptions& options);

/// Runs the pipeline over a directory. The bag file is written to bag_file
/// and detection streams it back one granularity group at a time.
RunResult run_directory(const std::filesystem::path& root, const LanguageConfig& cfg,
                        const RunOptions& options, const std::filesystem::path& bag_file);

/// 0 success, 2 partial (some files degraded or skipped), 1 fatal.
int exit_code_for(const RunManifest& manifest) noexcept;

}  // namespace polyclone
