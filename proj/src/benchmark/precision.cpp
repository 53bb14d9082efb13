#include "polyclone/benchmark/precision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <random>
#include <sstream>

#include "polyclone/error.hpp"

namespace polyclone::bench {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 4> kCutSections = {"constraint", "input", "output", "sample"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n#:*");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n:*");
    return s.substr(first, last - first + 1);
}

bool is_cut_heading(std::string_view text) {
    const auto t = lower(trim(text));
    if (t.empty() || t.size() > 40) return false;
    return std::any_of(kCutSections.begin(), kCutSections.end(), [&](auto w) { return t.rfind(w, 0) == 0; });
}

std::string strip_tags(std::string_view html) {
    std::string out;
    out.reserve(html.size());
    for (std::size_t i = 0; i < html.size(); ++i) {
        if (html[i] == '<') {
            const auto close = html.find('>', i);
            if (close == std::string_view::npos) break;
            out.push_back(' ');
            i = close;
        } else {
            out.push_back(html[i]);
        }
    }
    static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}, {"&quot;", "\""}, {"&nbsp;", " "}, {"&#39;", "'"}};
    for (const auto& [entity, text] : kEntities) {
        for (auto pos = out.find(entity); pos != std::string::npos; pos = out.find(entity, pos + text.size()))
            out.replace(pos, entity.size(), text);
    }
    return out;
}

/// Removes <tag ...>...</tag> blocks (script/style) entirely.
std::string drop_blocks(std::string html, std::string_view tag) {
    const auto lowered = lower(html);
    std::string out;
    std::size_t pos = 0;
    const std::string open = "<" + std::string(tag);
    const std::string close = "</" + std::string(tag) + ">";
    while (true) {
        const auto start = lowered.find(open, pos);
        if (start == std::string::npos) break;
        const auto end = lowered.find(close, start);
        out.append(html, pos, start - pos);
        if (end == std::string::npos) return out;
        pos = end + close.size();
    }
    out.append(html, pos, std::string::npos);
    return out;
}

std::uint64_t splitmix(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform draw in [0, bound) by rejection; portable across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(draw(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

}  // namespace

std::string_view to_string(PrecisionGroup group) noexcept {
    switch (group) {
        case PrecisionGroup::I: return "I";
        case PrecisionGroup::II: return "II";
        case PrecisionGroup::III: return "III";
    }
    return "I";
}

std::optional<PrecisionGroup> group_of(double jaccard) noexcept {
    if (jaccard < 0.0) return std::nullopt;
    if (jaccard < 0.3) return PrecisionGroup::I;
    if (jaccard < 0.6) return PrecisionGroup::II;
    if (jaccard < 0.9) return PrecisionGroup::III;
    return std::nullopt;
}

std::string trim_description(std::string_view raw) {
    const bool html = raw.find('<') != std::string_view::npos && raw.find('>') != std::string_view::npos;
    if (html) {
        auto doc = drop_blocks(drop_blocks(std::string(raw), "script"), "style");
        const auto lowered = lower(doc);
        std::size_t cut = std::string::npos;
        for (std::size_t pos = lowered.find("<h"); pos != std::string::npos; pos = lowered.find("<h", pos + 2)) {
            if (pos + 2 >= lowered.size() || !std::isdigit(static_cast<unsigned char>(lowered[pos + 2]))) continue;
            const auto open_end = lowered.find('>', pos);
            const auto close = lowered.find("</h", pos);
            if (open_end == std::string::npos || close == std::string::npos) break;
            if (is_cut_heading(strip_tags(doc.substr(open_end + 1, close - open_end - 1)))) {
                cut = pos;
                break;
            }
        }
        return strip_tags(std::string_view(doc).substr(0, cut));
    }

    std::string out;
    std::istringstream in{std::string(raw)};
    std::string line;
    while (std::getline(in, line)) {
        if (is_cut_heading(line)) break;
        out += line;
        out.push_back('\n');
    }
    return out;
}

std::set<std::string> word_set(std::string_view text) {
    std::set<std::string> words;
    std::string current;
    for (const char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            words.insert(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.insert(std::move(current));
    return words;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) noexcept {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t shared = 0;
    for (const auto& w : a) shared += b.count(w);
    const auto joined = a.size() + b.size() - shared;
    return static_cast<double>(shared) / static_cast<double>(joined);
}

PrecisionDataset build_precision_dataset(const Corpus& corpus, const std::map<std::string, std::string>& descriptions,
                                         const PrecisionOptions& options) {
    PrecisionDataset out;
    struct ProblemInfo {
        std::string id;
        std::set<std::string> words;
        double mean_length = 0.0;
    };
    std::vector<ProblemInfo> problems;
    for (const auto& [pid, subs] : corpus) {
        if (subs.empty()) continue;
        auto it = descriptions.find(pid);
        if (it == descriptions.end() || it->second.empty()) {
            out.warnings.push_back("problem " + pid + ": no description");
            continue;
        }
        double total = 0.0;
        for (const auto& s : subs) total += static_cast<double>(s.token_seq.size());
        problems.push_back({pid, word_set(trim_description(it->second)), total / static_cast<double>(subs.size())});
    }

    std::array<std::vector<ProblemPair>, 3> candidates;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        for (std::size_t j = i + 1; j < problems.size(); ++j) {
            const auto& a = problems[i];
            const auto& b = problems[j];
            const double longer = std::max(a.mean_length, b.mean_length);
            if (longer <= 0.0 || std::fabs(a.mean_length - b.mean_length) / longer > options.max_length_gap) continue;
            const double sim = jaccard(a.words, b.words);
            const auto group = group_of(sim);
            if (!group) continue;
            candidates[static_cast<std::size_t>(*group)].push_back(ProblemPair{a.id, b.id, sim, *group});
        }
    }

    for (std::size_t g = 0; g < candidates.size(); ++g) {
        auto& pool = candidates[g];
        seeded_shuffle(pool, splitmix(options.seed ^ splitmix(g + 1)));
        std::set<std::string> used;
        std::size_t taken = 0;
        for (auto& pair : pool) {
            if (taken >= options.pairs_per_group) break;
            if (used.contains(pair.pid_a) || used.contains(pair.pid_b)) continue;
            used.insert(pair.pid_a);
            used.insert(pair.pid_b);
            out.pairs.push_back(std::move(pair));
            ++taken;
        }
        if (taken < options.pairs_per_group) {
            out.warnings.push_back("InsufficientPairs: group " +
                                   std::string(to_string(static_cast<PrecisionGroup>(g))) + " has " +
                                   std::to_string(taken) + " of " + std::to_string(options.pairs_per_group));
        }
    }
    return out;
}

void materialize_precision(const fs::path& out, const PrecisionDataset& dataset, const Corpus& corpus) {
    fs::create_directories(out);
    std::ofstream csv(out / "pairs.csv", std::ios::binary);
    if (!csv) throw Error(ErrorCode::Io, "cannot write " + (out / "pairs.csv").string());
    csv << "group,pidA,pidB,jaccard\n";
    for (const auto& pair : dataset.pairs) {
        // Truncated so that the printed value never crosses a group boundary.
        const double shown = std::floor(pair.jaccard * 10000.0 + 1e-9) / 10000.0;
        csv << to_string(pair.group) << ',' << pair.pid_a << ',' << pair.pid_b << ',' << std::fixed
            << std::setprecision(4) << shown << std::defaultfloat << '\n';
        const auto unit = out / std::string(to_string(pair.group)) / pair.unit_name();
        std::vector<const Submission*> subs;
        for (const auto* pid : {&pair.pid_a, &pair.pid_b}) {
            auto it = corpus.find(*pid);
            if (it == corpus.end()) continue;
            for (const auto& s : it->second) subs.push_back(&s);
        }
        materialize(unit, subs);
    }
}

std::vector<ProblemPair> read_pairs_csv(std::istream& in) {
    std::vector<ProblemPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.rfind("group,", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 4) throw Error(ErrorCode::MalformedReport, "pairs.csv: bad line '" + line + "'");
        ProblemPair p{f[1], f[2], std::stod(f[3]), PrecisionGroup::I};
        if (f[0] == "II") p.group = PrecisionGroup::II;
        else if (f[0] == "III") p.group = PrecisionGroup::III;
        else if (f[0] != "I") throw Error(ErrorCode::MalformedReport, "pairs.csv: bad group '" + f[0] + "'");
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::string problem_of(const std::string& report_path) {
    const auto slash = report_path.find('/');
    return slash == std::string::npos ? std::string{} : report_path.substr(0, slash);
}

PairScore score_pair(const ProblemPair& pair, std::span<const ClonePair> report) {
    PairScore score{pair, 0, 0};
    for (const auto& p : report) {
        if (problem_of(p.left.file) == problem_of(p.right.file)) {
            ++score.true_positives;
        } else {
            ++score.false_positives;
        }
    }
    return score;
}

PrecisionScore score_precision(std::vector<PairScore> per_pair) {
    PrecisionScore result;
    std::array<std::vector<double>, 3> values;
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (const auto& s : per_pair) {
        auto& g = result.groups[static_cast<std::size_t>(s.pair.group)];
        ++g.pairs;
        if (s.empty()) {
            ++g.empty_pairs;
            continue;
        }
        g.true_positives += s.true_positives;
        g.false_positives += s.false_positives;
        values[static_cast<std::size_t>(s.pair.group)].push_back(s.precision());
        tp += s.true_positives;
        fp += s.false_positives;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        auto& g = result.groups[k];
        const auto reported = g.true_positives + g.false_positives;
        g.aggregate = reported == 0 ? 0.0 : static_cast<double>(g.true_positives) / static_cast<double>(reported);
        g.median = median(values[k]);
    }
    result.overall = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    result.per_pair = std::move(per_pair);
    return result;
}

}  // namespace polyclone::bench
