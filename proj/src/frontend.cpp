#include "polyclone/frontend.hpp"

#include <algorithm>

#include "adapters/adapters.hpp"
#include "polyclone/error.hpp"

namespace polyclone {

namespace {

/// Grammar-free adapter: tokens only, never a tree. Every file it handles
/// takes part at file granularity.
class LexicalAdapter final : public ParserAdapter {
public:
    [[nodiscard]] std::string_view name() const override { return "lexical"; }
    [[nodiscard]] ParseOutcome parse(std::string_view source, const LanguageConfig& cfg) const override {
        ParseOutcome outcome;
        outcome.tokens = lex_generic(source, cfg);
        return outcome;
    }
};

const std::vector<const ParserAdapter*>& registry() {
    static const LexicalAdapter lexical;
    static const std::vector<const ParserAdapter*> adapters = [] {
        std::vector<const ParserAdapter*> all{&lexical};
        for (const auto* a : detail::tree_sitter_adapters()) all.push_back(a);
        return all;
    }();
    return adapters;
}

}  // namespace

const ParserAdapter* find_adapter(std::string_view grammar_ref) {
    const auto& all = registry();
    auto it = std::find_if(all.begin(), all.end(), [&](const auto* a) { return a->name() == grammar_ref; });
    return it == all.end() ? nullptr : *it;
}

std::vector<std::string> adapter_names() {
    std::vector<std::string> names;
    for (const auto* a : registry()) names.emplace_back(a->name());
    return names;
}

ParseOutcome parse_file(std::string_view source, const LanguageConfig& cfg) {
    const auto* adapter = find_adapter(cfg.grammar_ref);
    if (adapter == nullptr) {
        throw Error(ErrorCode::AdapterUnavailable,
                    "no adapter '" + cfg.grammar_ref + "' for language " + cfg.language_id);
    }
    return adapter->parse(validate_source(source), cfg);
}

TokenBag file_level_bag(const ParseOutcome& outcome, std::string file) {
    std::vector<std::string> texts;
    std::uint32_t last = 1;
    for (const auto& t : outcome.tokens) {
        last = std::max(last, t.last_line());
        if (t.retained()) texts.push_back(t.text);
    }
    if (texts.empty()) throw Error(ErrorCode::EmptyAfterFiltering, file);
    return make_bag(CodeSegment{std::move(file), 1, last, 0}, texts);
}

TokenBag make_bag(CodeSegment segment, const std::vector<std::string>& texts) {
    std::vector<std::string_view> sorted(texts.begin(), texts.end());
    std::sort(sorted.begin(), sorted.end());
    TokenBag bag;
    bag.segment = std::move(segment);
    for (const auto& t : sorted) {
        if (!bag.counts.empty() && bag.counts.back().first == t) {
            ++bag.counts.back().second;
        } else {
            bag.counts.emplace_back(std::string(t), 1);
        }
    }
    bag.size = static_cast<std::uint32_t>(sorted.size());
    return bag;
}

}  // namespace polyclone
