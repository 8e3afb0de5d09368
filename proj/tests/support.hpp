#pragma once

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge::testing {

inline Sentence sent(std::string_view raw) { return Sentence::from_raw(std::string(raw)); }

inline Corpus corpus(std::initializer_list<std::string_view> lines) {
    Corpus c;
    for (auto l : lines) c.push_back(sent(l));
    return c;
}

inline ParallelCorpus parallel(std::initializer_list<std::pair<std::string_view, std::string_view>> pairs) {
    ParallelCorpus c;
    for (auto [s, t] : pairs) c.pairs.push_back({sent(s), sent(t)});
    return c;
}

/// Random sentence over the first `vocab` letters-as-words.
inline Sentence random_sentence(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len, std::size_t vocab) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len), word(0, vocab - 1);
    std::vector<std::string> tokens;
    for (std::size_t n = len(rng); n > 0; --n) tokens.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    return Sentence::from_tokens(std::move(tokens));
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("corpusforge-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

    std::filesystem::path write(const std::string& rel, const std::string& content) const {
        const auto p = path_ / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

  private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace corpusforge::testing
