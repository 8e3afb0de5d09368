#include "corpusforge/corpus_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "corpusforge/error.hpp"

namespace corpusforge {

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lines.empty() && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_lines(in);
}

Corpus read_corpus(const std::filesystem::path& path, const TokenizeProfile& profile) {
    Corpus corpus;
    for (auto& line : read_lines(path)) corpus.push_back(Sentence::from_raw(std::move(line), profile));
    return corpus;
}

ParallelCorpus read_parallel(const std::filesystem::path& source, const std::filesystem::path& target,
                             const TokenizeProfile& profile) {
    auto src = read_lines(source);
    auto tgt = read_lines(target);
    if (src.size() != tgt.size()) {
        throw DataError("line count mismatch: " + source.string() + " has " +
                        std::to_string(src.size()) + ", " + target.string() + " has " +
                        std::to_string(tgt.size()));
    }
    ParallelCorpus corpus;
    corpus.pairs.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        corpus.pairs.push_back({Sentence::from_raw(std::move(src[i]), profile),
                                Sentence::from_raw(std::move(tgt[i]), profile)});
    }
    return corpus;
}

ParallelCorpus read_parallel_tsv(std::istream& in, const TokenizeProfile& profile) {
    ParallelCorpus corpus;
    std::size_t lineno = 0;
    for (auto& line : read_lines(in)) {
        ++lineno;
        auto fields = split_tabs(line);
        if (fields.size() != 2) {
            throw ParseError("line " + std::to_string(lineno) + ": expected source<TAB>target, got " +
                                 std::to_string(fields.size()) + " fields",
                             lineno);
        }
        corpus.pairs.push_back({Sentence::from_raw(std::move(fields[0]), profile),
                                Sentence::from_raw(std::move(fields[1]), profile)});
    }
    return corpus;
}

ParallelCorpus read_parallel_tsv(const std::filesystem::path& path, const TokenizeProfile& profile) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return read_parallel_tsv(in, profile);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.position());
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', begin);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, tab - begin));
        begin = tab + 1;
    }
}

std::string format_fixed(double value, int digits) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", digits, value);
    std::string out(buf.data());
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

std::string format_exact(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

}  // namespace corpusforge
