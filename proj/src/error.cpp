#include "polyclone/error.hpp"
#include "polyclone/token.hpp"

#include <algorithm>

namespace polyclone {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedConfig: return "MalformedConfig";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::EmptyExtensionList: return "EmptyExtensionList";
        case ErrorCode::LexFailure: return "LexFailure";
        case ErrorCode::AdapterUnavailable: return "AdapterUnavailable";
        case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
        case ErrorCode::CorruptBagFile: return "CorruptBagFile";
        case ErrorCode::BothEmpty: return "BothEmpty";
        case ErrorCode::MalformedTruthFile: return "MalformedTruthFile";
        case ErrorCode::MalformedReport: return "MalformedReport";
        case ErrorCode::MissingCorpus: return "MissingCorpus";
        case ErrorCode::UnknownLanguage: return "UnknownLanguage";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string_view to_string(TokenCategory category) noexcept {
    switch (category) {
        case TokenCategory::Keyword: return "KEYWORD";
        case TokenCategory::Identifier: return "IDENTIFIER";
        case TokenCategory::Literal: return "LITERAL";
        case TokenCategory::Other: return "OTHER";
    }
    return "OTHER";
}

std::uint32_t Token::last_line() const noexcept {
    return line + static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace polyclone
