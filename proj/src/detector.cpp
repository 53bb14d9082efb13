#include "polyclone/detector.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polyclone/error.hpp"
#include "polyclone/tokenbag.hpp"

namespace polyclone {

namespace {

ClonePair make_pair(const CodeSegment& a, const CodeSegment& b, double similarity) {
    ClonePair pair;
    if (b < a) {
        pair.left = b;
        pair.right = a;
    } else {
        pair.left = a;
        pair.right = b;
    }
    pair.similarity = similarity;
    pair.granularity = a.granularity;
    return pair;
}

auto pair_key(const ClonePair& p) {
    return std::tie(p.left.file, p.left.start_line, p.left.end_line, p.right.file, p.right.start_line,
                    p.right.end_line, p.granularity, p.similarity);
}

bool same_segment_pair(const ClonePair& a, const ClonePair& b) {
    return a.left == b.left && a.right == b.right;
}

}  // namespace

bool DetectorConfig::accepts(std::uint32_t granularity) const noexcept {
    switch (mode) {
        case GranularityMode::FileOnly: return granularity == 0;
        case GranularityMode::Range: return granularity >= g_lo && granularity <= g_hi;
        case GranularityMode::All: return true;
    }
    return false;
}

std::string DetectorConfig::granularity_label() const {
    switch (mode) {
        case GranularityMode::FileOnly: return "file";
        case GranularityMode::All: return "all";
        case GranularityMode::Range: return std::to_string(g_lo) + ".." + std::to_string(g_hi);
    }
    return "all";
}

DetectorConfig DetectorConfig::with_granularity(DetectorConfig base, std::string_view spec) {
    auto number = [&](std::string_view s) {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
            throw std::invalid_argument("bad granularity '" + std::string(spec) + "'");
        }
        return v;
    };
    if (spec == "file") {
        base.mode = GranularityMode::FileOnly;
    } else if (spec == "all") {
        base.mode = GranularityMode::All;
    } else if (const auto dots = spec.find(".."); dots != std::string_view::npos) {
        base.mode = GranularityMode::Range;
        base.g_lo = number(spec.substr(0, dots));
        base.g_hi = number(spec.substr(dots + 2));
        if (base.g_lo > base.g_hi) throw std::invalid_argument("empty granularity range");
    } else {
        base.mode = GranularityMode::Range;
        base.g_lo = 0;
        base.g_hi = number(spec);
    }
    return base;
}

bool pair_less(const ClonePair& a, const ClonePair& b) noexcept { return pair_key(a) < pair_key(b); }

std::uint32_t multiset_overlap(const TokenCounts& a, const TokenCounts& b) noexcept {
    std::uint32_t shared = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        const int cmp = i->first.compare(j->first);
        if (cmp == 0) {
            shared += std::min(i->second, j->second);
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return shared;
}

double overlap_similarity(const TokenBag& a, const TokenBag& b) {
    const auto larger = std::max(a.size, b.size);
    if (larger == 0) return 0.0;
    return static_cast<double>(multiset_overlap(a.counts, b.counts)) / static_cast<double>(larger);
}

CandidateIndex::CandidateIndex(std::span<const TokenBag> group, double theta) : theta_(theta) {
    // Rarest tokens first: short prefixes then hit short posting lists.
    std::unordered_map<std::string_view, std::uint64_t> frequency;
    for (const auto& bag : group)
        for (const auto& [text, count] : bag.counts) frequency[text] += count;
    std::vector<std::pair<std::uint64_t, std::string_view>> order;
    order.reserve(frequency.size());
    for (const auto& [text, f] : frequency) order.emplace_back(f, text);
    std::sort(order.begin(), order.end());
    rank_.reserve(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) rank_.emplace(std::string(order[r].second), r);

    bags_.reserve(group.size());
    sizes_.reserve(group.size());
    for (const auto& bag : group) {
        bags_.push_back(encode(bag.counts));
        sizes_.push_back(bag.size);
    }
    std::vector<std::uint32_t> by_size(group.size());
    std::iota(by_size.begin(), by_size.end(), 0u);
    std::sort(by_size.begin(), by_size.end(), [this](auto a, auto b) { return ordered_before(a, b); });
    for (const auto idx : by_size) {
        std::size_t remaining = prefix_length(sizes_[idx]);
        std::uint32_t position = 0;
        for (const auto& [rank, count] : bags_[idx]) {
            for (std::uint32_t occ = 1; occ <= count && remaining > 0; ++occ, --remaining, ++position) {
                postings_[(static_cast<Element>(rank) << 32) | occ].push_back({idx, position});
            }
            if (remaining == 0) break;
        }
    }
}

CandidateIndex::Encoded CandidateIndex::encode(const TokenCounts& counts) const {
    Encoded enc;
    enc.reserve(counts.size());
    for (const auto& [text, count] : counts) {
        auto it = rank_.find(text);
        // Tokens unseen in the group cannot be shared; give them ranks past the end.
        const auto rank = it != rank_.end() ? it->second
                                            : static_cast<std::uint32_t>(rank_.size() + enc.size());
        enc.emplace_back(rank, count);
    }
    std::sort(enc.begin(), enc.end());
    return enc;
}

std::size_t CandidateIndex::prefix_length(std::uint32_t size) const noexcept {
    const auto bound = static_cast<std::size_t>(std::ceil((1.0 - theta_) * static_cast<double>(size))) + 1;
    return std::min<std::size_t>(bound, size);
}

std::vector<std::uint32_t> CandidateIndex::probe_encoded(const Encoded& bag, std::uint32_t size,
                                                         std::int64_t self) const {
    std::vector<std::uint32_t> candidates;
    std::size_t remaining = prefix_length(size);
    for (const auto& [rank, count] : bag) {
        for (std::uint32_t occ = 1; occ <= count && remaining > 0; ++occ, --remaining) {
            auto it = postings_.find((static_cast<Element>(rank) << 32) | occ);
            if (it == postings_.end()) continue;
            for (const auto& posting : it->second) {
                const auto other = posting.bag;
                if (static_cast<std::int64_t>(other) == self) continue;
                const auto lo = std::min(size, sizes_[other]);
                const auto hi = std::max(size, sizes_[other]);
                if (hi == 0 || static_cast<double>(lo) / static_cast<double>(hi) < theta_) continue;
                candidates.push_back(other);
            }
        }
        if (remaining == 0) break;
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return candidates;
}

std::vector<std::uint32_t> CandidateIndex::probe(std::uint32_t query) const {
    return probe_encoded(bags_.at(query), sizes_[query], query);
}

std::vector<std::uint32_t> CandidateIndex::probe(const TokenBag& bag) const {
    return probe_encoded(encode(bag.counts), bag.size, -1);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> CandidateIndex::matches(std::uint32_t query,
                                                                              Scratch& scratch) const {
    auto& acc = scratch.accumulated;
    auto& touched = scratch.touched;
    acc.assign(std::max(acc.size(), sizes_.size()), 0);

    const auto size = sizes_[query];
    if (size == 0) return {};
    const double dsize = static_cast<double>(size);
    // Partners are never larger than the query, so the query size decides
    // the overlap needed. The small slack keeps pruning on the safe side
    // of the floating-point comparison used when verifying.
    const auto needed = static_cast<std::int64_t>(std::ceil(theta_ * dsize - 1e-6));

    std::size_t remaining = prefix_length(size);
    std::uint32_t position = 0;
    for (const auto& [rank, count] : bags_[query]) {
        for (std::uint32_t occ = 1; occ <= count && remaining > 0; ++occ, --remaining, ++position) {
            auto it = postings_.find((static_cast<Element>(rank) << 32) | occ);
            if (it == postings_.end()) continue;
            const auto& list = it->second;
            auto p = std::partition_point(list.begin(), list.end(), [&](const Posting& e) {
                return static_cast<double>(sizes_[e.bag]) / dsize < theta_;
            });
            for (; p != list.end() && ordered_before(p->bag, query); ++p) {
                auto& a = acc[p->bag];
                if (a < 0) continue;
                if (a == 0) touched.push_back(p->bag);
                const std::int64_t rest = std::min<std::int64_t>(size - position - 1, sizes_[p->bag] - p->position - 1);
                if (a + 1 + rest >= needed) {
                    ++a;
                } else {
                    a = -1;
                }
            }
        }
        if (remaining == 0) break;
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> found;
    for (const auto other : touched) {
        if (acc[other] > 0) {
            const auto shared = overlap(query, other);
            if (static_cast<double>(shared) / dsize >= theta_) found.emplace_back(other, shared);
        }
        acc[other] = 0;
    }
    touched.clear();
    return found;
}

std::uint32_t CandidateIndex::overlap(std::uint32_t a, std::uint32_t b) const noexcept {
    const auto& x = bags_[a];
    const auto& y = bags_[b];
    std::uint32_t shared = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].first == y[j].first) {
            shared += std::min(x[i].second, y[j].second);
            ++i;
            ++j;
        } else if (x[i].first < y[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return shared;
}

CandidateIndex build_candidate_index(std::span<const TokenBag> group, double theta) {
    return CandidateIndex(group, theta);
}

std::vector<ClonePair> detect_group(std::span<const TokenBag> group, double theta, unsigned jobs) {
    if (group.size() < 2) return {};
    const CandidateIndex index(group, theta);

    std::vector<ClonePair> pairs;
    std::mutex merge;
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;

    auto worker = [&] {
        std::vector<ClonePair> local;
        CandidateIndex::Scratch scratch;
        while (true) {
            const auto begin = next.fetch_add(kChunk);
            if (begin >= group.size()) break;
            const auto end = std::min(group.size(), begin + kChunk);
            for (auto i = static_cast<std::uint32_t>(begin); i < end; ++i) {
                for (const auto& [j, shared] : index.matches(i, scratch)) {
                    const double sim = static_cast<double>(shared) / static_cast<double>(group[i].size);
                    local.push_back(make_pair(group[i].segment, group[j].segment, sim));
                }
            }
        }
        const std::lock_guard lock(merge);
        pairs.insert(pairs.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
    };

    jobs = std::max(1u, jobs);
    if (jobs == 1 || group.size() < 2 * kChunk) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    }
    return pairs;
}

void canonicalize(std::vector<ClonePair>& pairs) {
    std::erase_if(pairs, [](const ClonePair& p) { return p.left == p.right; });
    std::sort(pairs.begin(), pairs.end(), pair_less);
    // Distinct nodes can share a line range; keep one line per segment pair.
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const ClonePair& a, const ClonePair& b) {
                                return same_segment_pair(a, b) && a.granularity == b.granularity;
                            }),
                pairs.end());
}

std::vector<ClonePair> suppress_nested(std::vector<ClonePair> pairs) {
    using FileKey = std::pair<std::string_view, std::string_view>;
    std::map<std::uint32_t, std::map<FileKey, std::vector<const ClonePair*>>> by_level;
    for (const auto& p : pairs) {
        auto key = p.left.file <= p.right.file ? FileKey{p.left.file, p.right.file}
                                               : FileKey{p.right.file, p.left.file};
        by_level[p.granularity][key].push_back(&p);
    }

    std::vector<char> drop(pairs.size(), 0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        if (p.granularity == 0) continue;
        auto level = by_level.find(p.granularity - 1);
        if (level == by_level.end()) continue;
        auto key = p.left.file <= p.right.file ? FileKey{p.left.file, p.right.file}
                                               : FileKey{p.right.file, p.left.file};
        auto bucket = level->second.find(key);
        if (bucket == level->second.end()) continue;
        for (const auto* parent : bucket->second) {
            const bool straight = p.left.nests_in(parent->left) && p.right.nests_in(parent->right);
            const bool crossed = p.left.nests_in(parent->right) && p.right.nests_in(parent->left);
            if (straight || crossed) {
                drop[k] = 1;
                break;
            }
        }
    }

    std::vector<ClonePair> kept;
    kept.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (!drop[k]) kept.push_back(std::move(pairs[k]));
    return kept;
}

std::vector<ClonePair> detect(std::span<const TokenBag> bags, const DetectorConfig& cfg, unsigned jobs) {
    std::map<std::uint32_t, std::vector<TokenBag>> groups;
    for (const auto& bag : bags) {
        if (!cfg.accepts(bag.segment.granularity) || bag.size < cfg.min_tokens || bag.size == 0) continue;
        groups[bag.segment.granularity].push_back(bag);
    }
    std::vector<ClonePair> pairs;
    for (auto& [g, group] : groups) {
        auto found = detect_group(group, cfg.theta, jobs);
        pairs.insert(pairs.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
        group.clear();
        group.shrink_to_fit();
    }
    canonicalize(pairs);
    if (cfg.report_coarsest_only) pairs = suppress_nested(std::move(pairs));
    return pairs;
}

void write_report(std::span<const ClonePair> pairs, std::ostream& out, const DetectorConfig& cfg) {
    std::ostringstream theta;
    theta << cfg.theta;
    out << "#polyclone v1 theta=" << theta.str() << " minTokens=" << cfg.min_tokens << '\n';
    for (const auto& p : pairs) {
        out << percent_encode(p.left.file, ",") << ',' << p.left.start_line << ',' << p.left.end_line << ','
            << percent_encode(p.right.file, ",") << ',' << p.right.start_line << ',' << p.right.end_line << ','
            << p.granularity << ',' << std::fixed << std::setprecision(4) << p.similarity
            << std::defaultfloat << '\n';
    }
}

std::vector<ClonePair> read_report(std::istream& in) {
    std::vector<ClonePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::MalformedReport, "line " + std::to_string(line_no) + ": " + why);
    };
    auto number = [&](std::string_view s) {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            fields.push_back(rest.substr(0, pos));
        fields.push_back(rest);
        if (fields.size() != 8) fail("expected 8 fields");
        ClonePair p;
        try {
            p.left = {percent_decode(fields[0]), number(fields[1]), number(fields[2]), 0};
            p.right = {percent_decode(fields[3]), number(fields[4]), number(fields[5]), 0};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::MalformedReport) throw;
            fail(e.what());
        }
        p.granularity = number(fields[6]);
        p.left.granularity = p.right.granularity = p.granularity;
        try {
            p.similarity = std::stod(std::string(fields[7]));
        } catch (const std::exception&) {
            fail("bad similarity");
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace polyclone
