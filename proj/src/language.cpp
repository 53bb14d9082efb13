#include "polyclone/language.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyclone/error.hpp"

#ifndef POLYCLONE_DEFAULT_LANG_DIR
#define POLYCLONE_DEFAULT_LANG_DIR "languages"
#endif

namespace polyclone {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::MalformedConfig,
                        "unknown field '" + key + "' in " + std::string(where));
        }
    }
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::MissingField, key);
    return *it;
}

std::vector<std::string> string_list(const json& value, std::string_view what) {
    if (!value.is_array()) {
        throw Error(ErrorCode::MalformedConfig, std::string(what) + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string() || item.get_ref<const std::string&>().empty()) {
            throw Error(ErrorCode::MalformedConfig,
                        std::string(what) + " must contain non-empty strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<std::string> keyword_file(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(first, last - first + 1));
    }
    return words;
}

}  // namespace

bool LanguageConfig::matches_extension(const fs::path& file) const {
    const auto name = file.filename().string();
    return std::any_of(file_extensions.begin(), file_extensions.end(), [&](const auto& ext) {
        return name.size() > ext.size() && name.compare(name.size() - ext.size(), ext.size(), ext) == 0;
    });
}

LanguageConfig parse_language_config(std::string_view text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedConfig, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::MalformedConfig, "top level must be an object");
    reject_unknown(doc, {"languageId", "grammarRef", "keywords", "fileExtensions", "commentStripping"},
                   "language config");

    LanguageConfig cfg;
    const auto& id = require(doc, "languageId");
    const auto& grammar = require(doc, "grammarRef");
    if (!id.is_string() || id.get_ref<const std::string&>().empty())
        throw Error(ErrorCode::MalformedConfig, "languageId must be a non-empty string");
    if (!grammar.is_string()) throw Error(ErrorCode::MalformedConfig, "grammarRef must be a string");
    cfg.language_id = id.get<std::string>();
    cfg.grammar_ref = grammar.get<std::string>();

    const auto& keywords = require(doc, "keywords");
    std::vector<std::string> words;
    if (keywords.is_string()) {
        words = keyword_file(base_dir / keywords.get<std::string>());
    } else {
        words = string_list(keywords, "keywords");
    }
    cfg.keywords.insert(words.begin(), words.end());

    cfg.file_extensions = string_list(require(doc, "fileExtensions"), "fileExtensions");
    if (cfg.file_extensions.empty()) throw Error(ErrorCode::EmptyExtensionList, cfg.language_id);

    const auto& cs = require(doc, "commentStripping");
    if (!cs.is_object()) throw Error(ErrorCode::MalformedConfig, "commentStripping must be an object");
    reject_unknown(cs, {"lineComment", "blockComment", "stringDelimiters"}, "commentStripping");
    cfg.comments.line_comment = string_list(require(cs, "lineComment"), "lineComment");
    cfg.comments.string_delimiters = string_list(require(cs, "stringDelimiters"), "stringDelimiters");
    const auto& blocks = require(cs, "blockComment");
    if (!blocks.is_array()) throw Error(ErrorCode::MalformedConfig, "blockComment must be an array");
    for (const auto& b : blocks) {
        if (!b.is_object()) throw Error(ErrorCode::MalformedConfig, "blockComment entries are objects");
        reject_unknown(b, {"open", "close"}, "blockComment");
        const auto& open = require(b, "open");
        const auto& close = require(b, "close");
        if (!open.is_string() || !close.is_string() || open.get_ref<const std::string&>().empty() ||
            close.get_ref<const std::string&>().empty())
            throw Error(ErrorCode::MalformedConfig, "blockComment open/close must be non-empty strings");
        cfg.comments.block_comment.push_back({open.get<std::string>(), close.get<std::string>()});
    }
    return cfg;
}

LanguageConfig load_language_config(const fs::path& path) {
    return parse_language_config(read_file(path), path.parent_path());
}

std::vector<LanguageEntry> scan_language_dir(const fs::path& dir) {
    std::vector<LanguageEntry> entries;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return entries;
    for (const auto& item : fs::directory_iterator(dir)) {
        if (!item.is_regular_file() || item.path().extension() != ".json") continue;
        LanguageEntry entry{item.path(), std::nullopt, {}};
        try {
            entry.config = load_language_config(item.path());
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.path.filename() < b.path.filename(); });
    return entries;
}

fs::path default_language_dir() {
    if (const char* env = std::getenv("POLYCLONE_LANG_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return POLYCLONE_DEFAULT_LANG_DIR;
}

LanguageConfig find_language(const fs::path& dir, std::string_view language_id) {
    for (auto& entry : scan_language_dir(dir)) {
        if (entry.config && entry.config->language_id == language_id) return std::move(*entry.config);
    }
    throw Error(ErrorCode::UnknownLanguage,
                "no language '" + std::string(language_id) + "' in " + dir.string());
}

}  // namespace polyclone
