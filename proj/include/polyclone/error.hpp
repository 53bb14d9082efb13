#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyclone {

enum class ErrorCode {
    MalformedConfig,
    MissingField,
    EmptyExtensionList,
    LexFailure,
    AdapterUnavailable,
    EmptyAfterFiltering,
    CorruptBagFile,
    BothEmpty,
    MalformedTruthFile,
    MalformedReport,
    MissingCorpus,
    UnknownLanguage,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polyclone
