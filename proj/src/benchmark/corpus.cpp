#include "polyclone/benchmark/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "polyclone/benchmark/sequence.hpp"
#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/preprocess.hpp"

namespace polyclone::bench {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::optional<fs::path> language_dir(const fs::path& problem_dir, const LanguageConfig& cfg) {
    const auto wanted = lower(cfg.language_id);
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(problem_dir)) {
        if (entry.is_directory() && lower(entry.path().filename().string()) == wanted) dirs.push_back(entry.path());
    }
    if (dirs.empty()) return std::nullopt;
    std::sort(dirs.begin(), dirs.end());
    return dirs.front();
}

std::string extension_of(const fs::path& file, const LanguageConfig& cfg) {
    const auto name = file.filename().string();
    for (const auto& ext : cfg.file_extensions) {
        if (name.size() > ext.size() && name.compare(name.size() - ext.size(), ext.size(), ext) == 0) return ext;
    }
    return file.extension().string();
}

}  // namespace

Submission make_submission(std::string problem_id, std::string submission_id, std::string_view source,
                           const LanguageConfig& cfg, std::string extension) {
    Submission s;
    s.problem_id = std::move(problem_id);
    s.submission_id = std::move(submission_id);
    s.extension = std::move(extension);
    s.text = preprocess(validate_source(source), cfg.comments).text;
    const auto outcome = parse_file(s.text, cfg);
    s.token_seq = normalize_seq(outcome.tokens);
    s.retained_tokens = static_cast<std::size_t>(
        std::count_if(outcome.tokens.begin(), outcome.tokens.end(), [](const Token& t) { return t.retained(); }));
    s.line_count = count_lines(s.text);
    return s;
}

Corpus load_corpus(const fs::path& root, const LanguageConfig& cfg, const std::vector<std::string>& problems,
                   const CorpusOptions& options, std::vector<std::string>* warnings) {
    if (!fs::is_directory(root)) throw Error(ErrorCode::MissingCorpus, root.string());
    auto warn = [&](std::string msg) {
        if (warnings != nullptr) warnings->push_back(std::move(msg));
    };

    std::vector<std::string> ids = problems;
    if (ids.empty()) {
        for (const auto& entry : fs::directory_iterator(root)) {
            const auto name = entry.path().filename().string();
            if (entry.is_directory() && name != "problem_descriptions") ids.push_back(name);
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    Corpus corpus;
    for (const auto& pid : ids) {
        const auto problem_dir = root / pid;
        if (!fs::is_directory(problem_dir)) {
            warn("problem " + pid + ": not found");
            continue;
        }
        const auto dir = language_dir(problem_dir, cfg);
        if (!dir) {
            warn("problem " + pid + ": no " + cfg.language_id + " directory");
            continue;
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(*dir)) {
            if (entry.is_regular_file() && cfg.matches_extension(entry.path())) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        auto& subs = corpus[pid];
        for (const auto& file : files) {
            if (subs.size() >= options.max_per_problem) break;
            const auto ext = extension_of(file, cfg);
            auto name = file.filename().string();
            auto sid = name.substr(0, name.size() - ext.size());
            try {
                auto sub = make_submission(pid, std::move(sid), slurp(file), cfg, ext);
                sub.file = file;
                subs.push_back(std::move(sub));
            } catch (const Error& e) {
                warn(file.string() + ": " + e.what());
            }
        }
    }
    return corpus;
}

std::string read_description(const fs::path& root, const std::string& problem_id) {
    for (const char* ext : {".html", ".txt"}) {
        const auto path = root / "problem_descriptions" / (problem_id + ext);
        if (fs::is_regular_file(path)) return slurp(path);
    }
    return {};
}

void materialize(const fs::path& dir, const std::vector<const Submission*>& subs) {
    for (const auto* s : subs) {
        const auto target = dir / s->problem_id / s->file_name();
        fs::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + target.string());
        out << s->text;
    }
}

}  // namespace polyclone::bench
