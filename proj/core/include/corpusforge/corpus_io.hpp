#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge {

/// Reads all lines, stripping a trailing '\r' and a leading UTF-8 BOM.
std::vector<std::string> read_lines(std::istream& in);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// One sentence per line.
Corpus read_corpus(const std::filesystem::path& path, const TokenizeProfile& profile = {});

/// Two line-aligned files; differing line counts throw DataError.
ParallelCorpus read_parallel(const std::filesystem::path& source, const std::filesystem::path& target,
                             const TokenizeProfile& profile = {});

/// `source<TAB>target` per line; a line without exactly one tab throws ParseError.
ParallelCorpus read_parallel_tsv(const std::filesystem::path& path, const TokenizeProfile& profile = {});
ParallelCorpus read_parallel_tsv(std::istream& in, const TokenizeProfile& profile = {});

/// Splits on '\t' keeping empty fields.
std::vector<std::string> split_tabs(const std::string& line);

/// Fixed-point formatting, "%.<digits>f".
std::string format_fixed(double value, int digits);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace corpusforge
