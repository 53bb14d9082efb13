#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "polyclone/language.hpp"

namespace fixtures {

inline std::filesystem::path lang_dir() { return POLYCLONE_TEST_LANG_DIR; }

/// Shipped config for a language id, loaded once per id.
const polyclone::LanguageConfig& lang(const std::string& id);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// Runs a shell command, returning its exit status.
int run(const std::string& command);

}  // namespace fixtures
