#include "fixtures.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sys/wait.h>
#include <unistd.h>

namespace fixtures {

const polyclone::LanguageConfig& lang(const std::string& id) {
    static std::mutex mu;
    static std::map<std::string, polyclone::LanguageConfig> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, polyclone::find_language(lang_dir(), id)).first;
    return it->second;
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("polyclone-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

}  // namespace fixtures
