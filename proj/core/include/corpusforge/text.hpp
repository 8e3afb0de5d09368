#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace corpusforge {

struct TokenizeProfile {
    bool lowercase = true;
};

/// Rule-based tokenizer shared by every stage of the pipeline.
///
/// Whitespace (and control characters) separate chunks. Inside a chunk each
/// punctuation code point becomes its own token, except apostrophes and
/// hyphens that sit between two word characters (`l'état`, `well-known`) and
/// `.`/`,` between two digits (`3.14`, `1,000`). Lowercasing covers ASCII,
/// Latin-1, Latin Extended-A, Latin Extended Additional (Vietnamese), Greek
/// and Cyrillic. Invalid UTF-8 bytes are replaced by U+FFFD.
std::vector<std::string> tokenize(std::string_view raw, const TokenizeProfile& profile = {});

/// Joins tokens with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

/// True when `raw` holds a C0/C1 control character other than tab.
bool has_control_chars(std::string_view raw);

struct Sentence {
    std::string raw;
    std::vector<std::string> tokens;

    static Sentence from_raw(std::string raw, const TokenizeProfile& profile = {});
    /// Sentence whose raw text is the space-joined token list.
    static Sentence from_tokens(std::vector<std::string> tokens);

    bool empty() const noexcept { return tokens.empty(); }
    std::size_t size() const noexcept { return tokens.size(); }

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

using Corpus = std::vector<Sentence>;

struct Document {
    std::string id;
    std::vector<Sentence> sentences;
};

struct SentencePair {
    Sentence source;
    Sentence target;

    friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct ParallelCorpus {
    std::vector<SentencePair> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
    Corpus source_side() const;
    Corpus target_side() const;
};

struct CleaningConfig {
    double max_ratio = 4.0;
};

/// Every input pair is counted exactly once: either kept, or dropped for the
/// first failing check in the order duplicates, length ratio, empty/control.
struct CleaningReport {
    std::size_t input_pairs = 0;
    std::size_t kept_pairs = 0;
    std::size_t dropped_duplicates = 0;
    std::size_t dropped_length_ratio = 0;
    std::size_t dropped_empty_or_control = 0;

    std::size_t accounted() const noexcept {
        return kept_pairs + dropped_duplicates + dropped_length_ratio + dropped_empty_or_control;
    }
};

struct CleaningResult {
    ParallelCorpus corpus;
    CleaningReport report;
};

CleaningResult clean_parallel(const ParallelCorpus& corpus, const CleaningConfig& rules = {});

struct CorpusStats {
    std::size_t sentences = 0;
    std::size_t tokens = 0;
    std::size_t unique_tokens = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

struct ParallelStats {
    CorpusStats source;
    CorpusStats target;
};

ParallelStats corpus_stats(const ParallelCorpus& corpus);

}  // namespace corpusforge
