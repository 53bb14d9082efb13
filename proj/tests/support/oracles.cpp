#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace oracle {

using polyclone::ParseNode;
using polyclone::Token;
using polyclone::TokenCategory;
using polyclone::TokenSpan;

std::map<std::string, std::uint32_t> as_map(const TokenBag& bag) {
    std::map<std::string, std::uint32_t> m;
    for (const auto& [text, count] : bag.counts) m[text] += count;
    return m;
}

std::uint32_t intersection(const TokenBag& a, const TokenBag& b) {
    const auto ma = as_map(a);
    const auto mb = as_map(b);
    std::uint32_t shared = 0;
    for (const auto& [text, count] : ma) {
        auto it = mb.find(text);
        if (it != mb.end()) shared += std::min(count, it->second);
    }
    return shared;
}

double similarity(const TokenBag& a, const TokenBag& b) {
    std::uint32_t sa = 0;
    std::uint32_t sb = 0;
    for (const auto& kv : a.counts) sa += kv.second;
    for (const auto& kv : b.counts) sb += kv.second;
    const auto larger = std::max(sa, sb);
    if (larger == 0) return 0.0;
    return static_cast<double>(intersection(a, b)) / static_cast<double>(larger);
}

namespace {

auto key_of(const ClonePair& p) {
    return std::tie(p.left.file, p.left.start_line, p.left.end_line, p.right.file, p.right.start_line,
                    p.right.end_line, p.granularity);
}

}  // namespace

std::vector<ClonePair> all_pairs(const std::vector<TokenBag>& bags, double theta) {
    std::vector<std::map<std::string, std::uint32_t>> maps;
    std::vector<std::uint32_t> sizes;
    for (const auto& b : bags) {
        maps.push_back(as_map(b));
        std::uint32_t n = 0;
        for (const auto& kv : maps.back()) n += kv.second;
        sizes.push_back(n);
    }
    std::vector<ClonePair> out;
    for (std::size_t i = 0; i < bags.size(); ++i) {
        for (std::size_t j = i + 1; j < bags.size(); ++j) {
            const auto& a = bags[i];
            const auto& b = bags[j];
            if (a.segment.granularity != b.segment.granularity) continue;
            if (a.segment == b.segment) continue;
            std::uint32_t shared = 0;
            for (const auto& [text, count] : maps[i]) {
                auto it = maps[j].find(text);
                if (it != maps[j].end()) shared += std::min(count, it->second);
            }
            const auto larger = std::max(sizes[i], sizes[j]);
            const double sim = larger == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(larger);
            if (sim < theta) continue;
            ClonePair p;
            p.left = std::min(a.segment, b.segment);
            p.right = std::max(a.segment, b.segment);
            p.similarity = sim;
            p.granularity = a.segment.granularity;
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const ClonePair& x, const ClonePair& y) { return key_of(x) < key_of(y); });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const ClonePair& x, const ClonePair& y) { return key_of(x) == key_of(y); }),
              out.end());
    return out;
}

std::vector<ClonePair> suppress(const std::vector<ClonePair>& pairs) {
    std::vector<ClonePair> kept;
    for (const auto& child : pairs) {
        bool nested = false;
        for (const auto& parent : pairs) {
            if (parent.granularity + 1 != child.granularity) continue;
            const bool straight = child.left.nests_in(parent.left) && child.right.nests_in(parent.right);
            const bool crossed = child.left.nests_in(parent.right) && child.right.nests_in(parent.left);
            if (straight || crossed) {
                nested = true;
                break;
            }
        }
        if (!nested) kept.push_back(child);
    }
    return kept;
}

namespace {

std::string chain_rule(const ParseNode& n) {
    const ParseNode* cur = &n;
    std::string rule = n.rule;
    while (cur->children.size() == 1 && cur->children[0].span == cur->span) {
        cur = &cur->children[0];
        if (!cur->children.empty()) rule = cur->rule;
    }
    return rule;
}

void collect(const ParseNode& n, const ParseNode* parent, std::size_t min_size, std::uint32_t surviving_ancestors,
             std::vector<RefNode>& out) {
    const bool inner = !n.children.empty();
    const bool survives = inner && n.span.length() >= min_size && (parent == nullptr || parent->span != n.span);
    if (survives) out.push_back({n.span, surviving_ancestors, chain_rule(n)});
    // A node below a short node can never be long enough, so the whole tree
    // can be visited without explicit pruning.
    for (const auto& c : n.children) collect(c, &n, min_size, surviving_ancestors + (survives ? 1 : 0), out);
}

}  // namespace

std::vector<RefNode> simplify(const ParseNode& tree, std::size_t min_size) {
    min_size = std::max<std::size_t>(1, min_size);
    if (tree.children.empty() || tree.span.length() < min_size) return {{tree.span, 0, chain_rule(tree)}};
    std::vector<RefNode> out;
    collect(tree, nullptr, min_size, 0, out);
    return out;
}

std::vector<RefNode> flatten(const polyclone::SptNode& root) {
    std::vector<RefNode> out;
    std::function<void(const polyclone::SptNode&)> walk = [&](const polyclone::SptNode& n) {
        out.push_back({n.span, n.granularity, n.rule});
        for (const auto& c : n.children) walk(c);
    };
    walk(root);
    return out;
}

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    // Full (|a|+1) x (|b|+1) table; d[i][j] is the distance between the
    // first i tokens of a and the first j tokens of b.
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                d[i][j] = d[i - 1][j - 1];
            } else {
                d[i][j] = 1 + std::min({d[i - 1][j], d[i][j - 1], d[i - 1][j - 1]});
            }
        }
    }
    return d[a.size()][b.size()];
}

namespace {

std::string key(const polyclone::bench::Submission& s) { return s.problem_id + "/" + s.file_name(); }

double coverage(const CodeSegment& seg, std::uint32_t lines) {
    std::uint32_t covered = 0;
    for (std::uint32_t line = 1; line <= lines; ++line) {
        if (line >= seg.start_line && line <= seg.end_line) ++covered;
    }
    return lines == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(lines);
}

}  // namespace

polyclone::bench::RecallScore match(const std::vector<ClonePair>& report,
                                    const std::vector<polyclone::bench::LabeledClone>& truth,
                                    const polyclone::bench::MatchConfig& cfg) {
    polyclone::bench::RecallScore score{};
    for (const auto& t : truth) {
        if (!t.left->passes(cfg) || !t.right->passes(cfg)) continue;
        int bucket = -1;
        const double pct = t.lev_simi * 100.0;
        if (pct >= 100.0 - 1e-9) bucket = 4;
        else if (pct >= 80.0 - 1e-9) bucket = 3;
        else if (pct >= 60.0 - 1e-9) bucket = 2;
        else if (pct >= 40.0 - 1e-9) bucket = 1;
        else if (pct >= 20.0 - 1e-9) bucket = 0;
        if (bucket < 0) continue;
        auto& b = score[static_cast<std::size_t>(bucket)];
        ++b.total;
        const auto lk = key(*t.left);
        const auto rk = key(*t.right);
        for (const auto& p : report) {
            auto hits = [&](const CodeSegment& x, const std::string& k, const polyclone::bench::Submission& s) {
                return x.file == k && coverage(x, s.line_count) >= cfg.coverage;
            };
            if ((hits(p.left, lk, *t.left) && hits(p.right, rk, *t.right)) ||
                (hits(p.left, rk, *t.right) && hits(p.right, lk, *t.left))) {
                ++b.detected;
                break;
            }
        }
    }
    return score;
}

TokenBag random_bag(std::mt19937_64& rng, std::string file, std::uint32_t line, std::uint32_t granularity,
                    std::size_t alphabet, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::uniform_int_distribution<std::size_t> tok(0, alphabet - 1);
    std::map<std::string, std::uint32_t> m;
    const auto n = size_dist(rng);
    for (std::size_t i = 0; i < n; ++i) ++m["t" + std::to_string(tok(rng))];
    TokenBag bag;
    bag.segment = {std::move(file), line, line + static_cast<std::uint32_t>(n), granularity};
    for (const auto& [text, count] : m) {
        bag.counts.emplace_back(text, count);
        bag.size += count;
    }
    return bag;
}

namespace {

std::size_t assign_spans(ParseNode& n, std::size_t next) {
    if (n.children.empty()) {
        n.span = {next, next + 1};
        return next + 1;
    }
    const auto begin = next;
    for (auto& c : n.children) next = assign_spans(c, next);
    n.span = {begin, next};
    return next;
}

}  // namespace

ParseNode random_tree(std::mt19937_64& rng, std::size_t max_nodes) {
    std::uniform_int_distribution<std::size_t> total_dist(1, max_nodes);
    const auto total = total_dist(rng);
    // Attach each new node to a uniformly chosen earlier node; parent
    // pointers then give a random ordered tree.
    std::vector<std::size_t> parent(total, 0);
    for (std::size_t i = 1; i < total; ++i) parent[i] = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::vector<std::vector<std::size_t>> kids(total);
    for (std::size_t i = 1; i < total; ++i) kids[parent[i]].push_back(i);
    std::function<ParseNode(std::size_t)> make = [&](std::size_t id) {
        ParseNode n;
        if (!kids[id].empty()) n.rule = "r" + std::to_string(id);
        for (auto k : kids[id]) n.children.push_back(make(k));
        return n;
    };
    auto root = make(0);
    assign_spans(root, 0);
    return root;
}

std::vector<Token> random_tokens(std::mt19937_64& rng, std::size_t n) {
    std::vector<Token> out;
    std::uniform_int_distribution<int> cat(0, 3);
    std::uniform_int_distribution<int> newline(0, 2);
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Token t;
        t.category = static_cast<TokenCategory>(cat(rng));
        t.text = "k" + std::to_string(i % 5);
        t.line = line;
        t.col = col;
        out.push_back(t);
        col += 3;
        if (newline(rng) == 0) {
            ++line;
            col = 1;
        }
    }
    return out;
}

}  // namespace oracle
