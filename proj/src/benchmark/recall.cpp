#include "polyclone/benchmark/recall.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "polyclone/benchmark/sequence.hpp"
#include "polyclone/error.hpp"

namespace polyclone::bench {

namespace fs = std::filesystem;

int bucket_of(double lev_simi) noexcept {
    const auto percent = static_cast<long>(std::floor(lev_simi * 100.0 + 1e-9));
    if (percent < 20) return -1;
    if (percent >= 100) return 4;
    return static_cast<int>((percent - 20) / 20);
}

RecallDataset build_recall_dataset(const Corpus& corpus, const std::vector<std::string>& selection,
                                   const MatchConfig& match) {
    RecallDataset out;
    std::vector<std::string> ids = selection;
    if (ids.empty())
        for (const auto& [pid, subs] : corpus) ids.push_back(pid);

    for (const auto& pid : ids) {
        auto it = corpus.find(pid);
        if (it == corpus.end()) {
            out.warnings.push_back("TooFewSubmissions: problem " + pid + " not in corpus");
            continue;
        }
        std::vector<const Submission*> eligible;
        for (const auto& s : it->second)
            if (s.passes(match)) eligible.push_back(&s);
        if (eligible.size() < 2) {
            out.warnings.push_back("TooFewSubmissions: problem " + pid + " has " + std::to_string(eligible.size()) +
                                   " eligible submissions");
            continue;
        }
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            for (std::size_t j = i + 1; j < eligible.size(); ++j) {
                const double simi = lev_simi(eligible[i]->token_seq, eligible[j]->token_seq);
                const int bucket = bucket_of(simi);
                if (bucket < 0) continue;
                out.clones.push_back(LabeledClone{eligible[i], eligible[j], simi});
                ++out.histogram[static_cast<std::size_t>(bucket)];
            }
        }
    }
    return out;
}

void write_truth(std::span<const LabeledClone> clones, std::ostream& out) {
    for (const auto& c : clones) {
        // Truncated, not rounded, so the printed value stays in its bucket.
        const double shown = std::floor(c.lev_simi * 10000.0 + 1e-9) / 10000.0;
        out << c.left->problem_id << ',' << c.left->submission_id << ',' << c.right->submission_id << ','
            << std::fixed << std::setprecision(4) << shown << std::defaultfloat << '\n';
    }
}

std::vector<TruthRow> read_truth(std::istream& in) {
    std::vector<TruthRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 4 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw Error(ErrorCode::MalformedTruthFile, "line " + std::to_string(line_no) + ": expected 4 fields");
        }
        TruthRow row{fields[0], fields[1], fields[2], 0.0};
        std::size_t used = 0;
        try {
            row.lev_simi = std::stod(fields[3], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != fields[3].size() || row.lev_simi < 0.0 || row.lev_simi > 1.0) {
            throw Error(ErrorCode::MalformedTruthFile, "line " + std::to_string(line_no) + ": bad levSimi");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string default_file_key(const Submission& s) { return s.problem_id + "/" + s.file_name(); }

double line_coverage(const CodeSegment& seg, std::uint32_t line_count) noexcept {
    if (line_count == 0) return 0.0;
    const auto lo = std::max<std::uint32_t>(seg.start_line, 1);
    const auto hi = std::min<std::uint32_t>(seg.end_line, line_count);
    if (hi < lo) return 0.0;
    return static_cast<double>(hi - lo + 1) / static_cast<double>(line_count);
}

RecallScore match_clones(std::span<const ClonePair> report, std::span<const LabeledClone> truth,
                         const MatchConfig& cfg, FileKeyFn key) {
    std::map<std::pair<std::string_view, std::string_view>, std::vector<const ClonePair*>> by_files;
    for (const auto& p : report) {
        std::string_view a = p.left.file;
        std::string_view b = p.right.file;
        if (b < a) std::swap(a, b);
        by_files[{a, b}].push_back(&p);
    }

    RecallScore score{};
    for (const auto& clone : truth) {
        if (!clone.left->passes(cfg) || !clone.right->passes(cfg)) continue;
        const int bucket = bucket_of(clone.lev_simi);
        if (bucket < 0) continue;
        auto& cell = score[static_cast<std::size_t>(bucket)];
        ++cell.total;

        const auto left_key = key(*clone.left);
        const auto right_key = key(*clone.right);
        std::string_view a = left_key;
        std::string_view b = right_key;
        if (b < a) std::swap(a, b);
        auto it = by_files.find({a, b});
        if (it == by_files.end()) continue;

        auto covers = [&](const CodeSegment& seg, const Submission& sub) {
            return line_coverage(seg, sub.line_count) >= cfg.coverage;
        };
        for (const auto* p : it->second) {
            const bool straight = p->left.file == left_key && p->right.file == right_key &&
                                  covers(p->left, *clone.left) && covers(p->right, *clone.right);
            const bool crossed = p->left.file == right_key && p->right.file == left_key &&
                                 covers(p->left, *clone.right) && covers(p->right, *clone.left);
            if (straight || crossed) {
                ++cell.detected;
                break;
            }
        }
    }
    return score;
}

LoadedRecallDataset load_recall_dataset(const fs::path& dir, const LanguageConfig& cfg) {
    std::ifstream in(dir / "truth.csv");
    if (!in) throw Error(ErrorCode::MissingCorpus, (dir / "truth.csv").string());
    const auto rows = read_truth(in);

    LoadedRecallDataset data;
    std::map<std::pair<std::string, std::string>, const Submission*> loaded;
    auto resolve = [&](const std::string& pid, const std::string& sid) -> const Submission* {
        auto it = loaded.find({pid, sid});
        if (it != loaded.end()) return it->second;
        for (const auto& ext : cfg.file_extensions) {
            const auto path = dir / "corpus" / pid / (sid + ext);
            if (!fs::is_regular_file(path)) continue;
            std::ifstream src(path, std::ios::binary);
            std::ostringstream buf;
            buf << src.rdbuf();
            auto& sub = data.submissions.emplace_back(make_submission(pid, sid, buf.str(), cfg, ext));
            sub.file = path;
            loaded[{pid, sid}] = &sub;
            return &sub;
        }
        throw Error(ErrorCode::MalformedTruthFile, "no corpus file for " + pid + "/" + sid);
    };
    for (const auto& row : rows) {
        data.clones.push_back(LabeledClone{resolve(row.problem_id, row.left), resolve(row.problem_id, row.right),
                                           row.lev_simi});
    }
    return data;
}

}  // namespace polyclone::bench
