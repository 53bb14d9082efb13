#include "polyclone/tokenbag.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "polyclone/error.hpp"

namespace polyclone {

namespace {

constexpr std::string_view kMagic = "MSB1";
constexpr std::string_view kTrailer = "END";
constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv1a(std::uint64_t& hash, std::string_view bytes) noexcept {
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= kFnvPrime;
    }
}

std::string hex64(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
    return s;
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptBagFile, what); }

template <typename T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) corrupt(std::string("bad ") + what + " '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

std::string encode_record(const TokenBag& bag) {
    std::string line = percent_encode(bag.segment.file, "\t");
    for (const auto v : {bag.segment.start_line, bag.segment.end_line, bag.segment.granularity, bag.size}) {
        line.push_back('\t');
        line += std::to_string(v);
    }
    line.push_back('\t');
    bool first = true;
    for (const auto& [text, count] : bag.counts) {
        if (!first) line.push_back(',');
        first = false;
        line += percent_encode(text, "\t,=");
        line.push_back('=');
        line += std::to_string(count);
    }
    line.push_back('\n');
    return line;
}

void collect_bags(const SptNode& node, std::span<const Token> tokens, const std::string& file,
                  const KeywordSet* keywords, std::size_t min_tokens, std::vector<TokenBag>& out) {
    const bool target = keywords == nullptr || keywords_filter(node, *keywords, tokens);
    if (target && node.span.end <= tokens.size()) {
        std::vector<std::string> texts;
        for (std::size_t i = node.span.begin; i < node.span.end; ++i) {
            if (tokens[i].retained()) texts.push_back(tokens[i].text);
        }
        if (!texts.empty() && texts.size() >= min_tokens) {
            out.push_back(make_bag(CodeSegment{file, node.start_line, node.end_line, node.granularity}, texts));
        }
    }
    for (const auto& child : node.children) collect_bags(child, tokens, file, keywords, min_tokens, out);
}

}  // namespace

std::string percent_encode(std::string_view text, std::string_view reserved) {
    static constexpr char kDigits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (c == '%' || c == '\n' || c == '\r' || reserved.find(c) != std::string_view::npos) {
            out.push_back('%');
            out.push_back(kDigits[u >> 4]);
            out.push_back(kDigits[u & 0xF]);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string percent_decode(std::string_view text) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '%') {
            out.push_back(text[i]);
            continue;
        }
        if (i + 2 >= text.size()) corrupt("truncated escape");
        const int hi = hex(text[i + 1]);
        const int lo = hex(text[i + 2]);
        if (hi < 0 || lo < 0) corrupt("bad escape");
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
    }
    return out;
}

bool keywords_filter(const SptNode& node, const KeywordSet& keywords, std::span<const Token> tokens) {
    for (const auto& span : node.partition) {
        int flag = 0;
        for (std::size_t i = span.begin; i < span.end && i < tokens.size(); ++i) {
            flag |= keywords.contains(tokens[i].text) ? 1 : 3;
        }
        if (flag == 1) return true;
    }
    return false;
}

std::vector<TokenBag> generate_bags(const SptNode& root, std::span<const Token> tokens,
                                    const std::string& file, const KeywordSet* keywords,
                                    std::size_t min_tokens) {
    std::vector<TokenBag> bags;
    collect_bags(root, tokens, file, keywords, std::max<std::size_t>(1, min_tokens), bags);
    return bags;
}

BagWriter::BagWriter(std::ostream& out, std::string_view language_id, std::size_t min_tokens)
    : out_(out), hash_(kFnvOffset) {
    out_ << kMagic << ' ' << percent_encode(language_id, " \t") << ' ' << min_tokens << '\n';
}

void BagWriter::write(const TokenBag& bag) {
    const auto record = encode_record(bag);
    fnv1a(hash_, record);
    out_ << record;
    ++count_;
}

void BagWriter::finish() {
    if (finished_) return;
    out_ << kTrailer << ' ' << count_ << ' ' << hex64(hash_) << '\n';
    out_.flush();
    finished_ = true;
}

void write_bags(std::span<const TokenBag> bags, std::ostream& out, std::string_view language_id,
                std::size_t min_tokens) {
    BagWriter writer(out, language_id, min_tokens);
    for (const auto& bag : bags) writer.write(bag);
    writer.finish();
}

std::vector<TokenBag> read_bags(std::istream& in, BagFileHeader* header,
                                const std::function<bool(std::uint32_t)>& keep) {
    std::string line;
    if (!std::getline(in, line)) corrupt("missing header");
    const auto head = split(line, ' ');
    if (head.size() != 3 || head[0] != kMagic) corrupt("unsupported version or header '" + line + "'");
    if (header != nullptr) {
        header->language_id = percent_decode(head[1]);
        header->min_tokens = parse_number<std::size_t>(head[2], "minTokens");
    }

    std::vector<TokenBag> bags;
    std::uint64_t hash = kFnvOffset;
    std::size_t records = 0;
    bool trailer_seen = false;
    while (std::getline(in, line)) {
        if (trailer_seen) {
            if (!line.empty()) corrupt("data after trailer");
            continue;
        }
        if (line.rfind("END ", 0) == 0) {
            const auto parts = split(line, ' ');
            if (parts.size() != 3) corrupt("bad trailer");
            if (parse_number<std::size_t>(parts[1], "record count") != records) corrupt("record count mismatch");
            if (parts[2] != hex64(hash)) corrupt("checksum mismatch");
            trailer_seen = true;
            continue;
        }
        if (in.eof()) corrupt("truncated record");
        fnv1a(hash, line);
        fnv1a(hash, "\n");
        ++records;

        const auto fields = split(line, '\t');
        if (fields.size() != 6) corrupt("record has " + std::to_string(fields.size()) + " fields");
        const auto granularity = parse_number<std::uint32_t>(fields[3], "granularity");
        if (keep && !keep(granularity)) continue;

        TokenBag bag;
        bag.segment.file = percent_decode(fields[0]);
        bag.segment.start_line = parse_number<std::uint32_t>(fields[1], "start line");
        bag.segment.end_line = parse_number<std::uint32_t>(fields[2], "end line");
        bag.segment.granularity = granularity;
        bag.size = parse_number<std::uint32_t>(fields[4], "size");
        std::uint64_t total = 0;
        if (!fields[5].empty()) {
            for (const auto item : split(fields[5], ',')) {
                const auto eq = item.rfind('=');
                if (eq == std::string_view::npos) corrupt("token entry without count");
                const auto count = parse_number<std::uint32_t>(item.substr(eq + 1), "count");
                if (count == 0) corrupt("zero multiplicity");
                bag.counts.emplace_back(percent_decode(item.substr(0, eq)), count);
                total += count;
            }
        }
        if (total != bag.size) corrupt("bag size does not match multiplicities");
        bags.push_back(std::move(bag));
    }
    if (!trailer_seen) corrupt("missing trailer (truncated file)");
    return bags;
}

}  // namespace polyclone
