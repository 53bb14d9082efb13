#include "synth.hpp"

#include <cctype>
#include <map>
#include <regex>
#include <sstream>

namespace synth {

namespace {

const char* const kSyllables[] = {"ka", "lo", "mi", "ne", "su", "ta", "ri", "po", "ve", "du",
                                  "zo", "gi", "ha", "be", "fu", "xa", "wo", "qi", "je", "yu"};

std::string stem(std::size_t k) {
    std::string out;
    do {
        out += kSyllables[k % 20];
        k /= 20;
    } while (k > 0);
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

class Writer {
public:
    Writer(std::mt19937_64& rng, const JavaOptions& opts) : rng_(rng), opts_(opts) {}

    std::string var() { return "v" + stem(pick(opts_.vocabulary)); }
    std::string method() { return "m" + stem(pick(opts_.vocabulary)); }
    std::string num() { return std::to_string(pick(100)); }

    std::string expr() {
        switch (pick(5)) {
            case 0: return var() + " + " + num();
            case 1: return var() + " * " + var();
            case 2: return "Math.max(" + var() + ", " + num() + ")";
            case 3: return var() + "[" + var() + "]";
            default: return var() + " - " + var() + " / " + num();
        }
    }

    void statements(std::size_t depth, std::size_t indent) {
        const auto n = range(opts_.statements_min, opts_.statements_max);
        for (std::size_t i = 0; i < n; ++i) statement(depth, indent);
    }

    void statement(std::size_t depth, std::size_t indent) {
        const auto kind = depth >= 2 ? pick(4) : pick(8);
        switch (kind) {
            case 0: line(indent, "int " + var() + " = " + expr() + ";"); break;
            case 1: line(indent, var() + " += " + expr() + ";"); break;
            case 2: line(indent, var() + "[" + var() + "] = " + expr() + ";"); break;
            case 3: line(indent, "System.out.println(" + expr() + ");"); break;
            case 4: {
                const auto i = var();
                line(indent, "for (int " + i + " = 0; " + i + " < " + var() + ".length; " + i + "++) {");
                statements(depth + 1, indent + 1);
                line(indent, "}");
                break;
            }
            case 5:
                line(indent, "if (" + var() + " > " + num() + ") {");
                statements(depth + 1, indent + 1);
                line(indent, "} else {");
                statements(depth + 1, indent + 1);
                line(indent, "}");
                break;
            case 6:
                line(indent, "while (" + var() + " < " + num() + ") {");
                statements(depth + 1, indent + 1);
                line(indent, "}");
                break;
            default:
                line(indent, "if (" + var() + " == " + var() + ") {");
                statements(depth + 1, indent + 1);
                line(indent, "}");
                break;
        }
    }

    void line(std::size_t indent, const std::string& text) { out_ << std::string(indent * 4, ' ') << text << '\n'; }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::size_t range(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    std::string str() const { return out_.str(); }

private:
    std::mt19937_64& rng_;
    const JavaOptions& opts_;
    std::ostringstream out_;
};

std::vector<std::string> split_lines(const std::string& src) {
    std::vector<std::string> lines;
    std::istringstream in(src);
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    return lines;
}

}  // namespace

std::string java_class(std::mt19937_64& rng, const std::string& class_name, const JavaOptions& opts) {
    Writer w(rng, opts);
    w.line(0, "public class " + class_name + " {");
    const auto methods = w.range(opts.methods_min, opts.methods_max);
    for (std::size_t m = 0; m < methods; ++m) {
        if (m > 0) w.line(0, "");
        w.line(1, "public static int " + w.method() + "(int[] " + w.var() + ", int " + w.var() + ") {");
        w.statements(0, 2);
        w.line(2, "return " + w.expr() + ";");
        w.line(1, "}");
    }
    w.line(0, "}");
    return w.str();
}

std::string reformat(const std::string& src, std::mt19937_64& rng) {
    std::ostringstream out;
    std::uniform_int_distribution<int> coin(0, 3);
    for (const auto& l : split_lines(src)) {
        const auto first = l.find_first_not_of(' ');
        const std::string body = first == std::string::npos ? "" : l.substr(first);
        switch (coin(rng)) {
            case 0: out << "\t" << body << '\n'; break;
            case 1: out << "  " << body << "  // note\n"; break;
            case 2: out << "/* c */ " << body << "\n\n"; break;
            default: out << body << '\n'; break;
        }
    }
    return out.str();
}

bool is_generated_identifier(const std::string& word) {
    static const std::regex pattern("^[vm][A-Z][a-z]+$");
    return std::regex_match(word, pattern);
}

std::string rename(const std::string& src, std::mt19937_64& rng, bool literals, double identifier_fraction) {
    static const std::regex word("[A-Za-z_][A-Za-z0-9_]*|[0-9]+");
    std::map<std::string, std::string> mapping;
    const auto salt = std::to_string(std::uniform_int_distribution<int>(100, 999)(rng));
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    std::string out;
    auto last = src.cbegin();
    for (std::sregex_iterator it(src.begin(), src.end(), word), end; it != end; ++it) {
        out.append(last, src.cbegin() + it->position());
        const std::string w = it->str();
        if (std::isdigit(static_cast<unsigned char>(w[0]))) {
            if (!literals) {
                out += w;
                last = src.cbegin() + it->position() + it->length();
                continue;
            }
            out += std::to_string(std::stoul(w) * 7 + 3);
        } else if (is_generated_identifier(w)) {
            auto [slot, fresh] = mapping.try_emplace(w);
            if (fresh) {
                const bool renamed = identifier_fraction >= 1.0 || pick(rng) < identifier_fraction;
                slot->second = renamed ? "r" + salt + "_" + std::to_string(mapping.size()) : w;
            }
            out += slot->second;
        } else {
            out += w;
        }
        last = src.cbegin() + it->position() + it->length();
    }
    out.append(last, src.cend());
    return out;
}

std::string delete_statements(const std::string& src, double fraction, std::mt19937_64& rng) {
    std::bernoulli_distribution drop(fraction);
    std::ostringstream out;
    for (const auto& l : split_lines(src)) {
        const bool simple = !l.empty() && l.back() == ';' && l.find("return") == std::string::npos;
        if (simple && drop(rng)) continue;
        out << l << '\n';
    }
    return out.str();
}

}  // namespace synth

#include <filesystem>
#include <fstream>

namespace synth {

namespace {

void put(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

std::string word(std::size_t k) { return "w" + std::to_string(k); }

}  // namespace

void write_oj_corpus(const std::string& root, std::mt19937_64& rng, const OjOptions& opts) {
    const std::filesystem::path base(root);
    // Problems come in families sharing a description core; within a family
    // the per-problem noise decides how similar two statements are.
    std::size_t next_word = 0;
    std::vector<std::string> family_core;
    for (std::size_t p = 0; p < opts.problems; ++p) {
        if (p % 4 == 0) {
            family_core.clear();
            for (int i = 0; i < 20; ++i) family_core.push_back(word(next_word++));
        }
        const std::size_t noise = (p % 4) * 6 + 1;
        std::ostringstream desc;
        desc << "Problem " << p << "\n";
        for (const auto& w : family_core) desc << w << ' ';
        for (std::size_t i = 0; i < noise; ++i) desc << word(next_word++) << ' ';
        desc << "\n\nInput\nthe input has numbers n and m\n\nOutput\nprint the answer\n";
        const auto pid = "p" + std::to_string(1000 + p);
        put(base / "problem_descriptions" / (pid + ".txt"), desc.str());

        const auto seed_src = java_class(rng, "Main");
        for (std::size_t s = 0; s < opts.submissions; ++s) {
            std::string src = seed_src;
            switch (s % 4) {
                case 0: break;
                case 1: src = reformat(src, rng); break;
                case 2: src = delete_statements(src, 0.2, rng); break;
                default: src = rename(src, rng, false); break;
            }
            put(base / pid / opts.language_dir / ("s" + std::to_string(s) + ".java"), src);
        }
    }
}

}  // namespace synth
