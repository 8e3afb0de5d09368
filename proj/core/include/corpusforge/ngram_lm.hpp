#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge {

using WordId = std::uint32_t;

inline constexpr WordId kNoWord = 0xFFFFFFFFu;

/// log10 value used for impossible events (ARPA convention for `<s>`).
inline constexpr double kLogZero = -99.0;

struct WordIdsHash {
    std::size_t operator()(const std::vector<WordId>& ids) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (WordId id : ids) {
            h ^= id;
            h *= 1099511628211ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct NGramEntry {
    double log_prob = 0.0;
    double log_backoff = 0.0;  // 0 when the n-gram is never used as a context
};

using NGramTable = std::unordered_map<std::vector<WordId>, NGramEntry, WordIdsHash>;

/// Back-off n-gram model in ARPA form (log10 probabilities).
///
/// Models produced by `train_lm` are interpolated Kneser-Ney: every stored
/// probability already includes the interpolated lower-order mass, and each
/// context's back-off weight is its interpolation weight, so a back-off query
/// reproduces the interpolated distribution exactly.
class NGramModel {
  public:
    static constexpr std::string_view kBos = "<s>";
    static constexpr std::string_view kEos = "</s>";
    static constexpr std::string_view kUnk = "<unk>";

    NGramModel() = default;
    explicit NGramModel(int order);

    int order() const noexcept { return order_; }

    std::size_t vocabulary_size() const noexcept { return words_.size(); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::string& word(WordId id) const { return words_.at(id); }

    /// Id of `word`, or of `<unk>` when absent, or kNoWord when the model has no `<unk>`.
    WordId lookup(std::string_view word) const;
    /// Exact lookup without the `<unk>` fallback.
    std::optional<WordId> find(std::string_view word) const;
    bool in_vocabulary(std::string_view word) const { return find(word).has_value(); }

    WordId add_word(std::string word);

    /// `n` in [1, order].
    const NGramTable& ngrams(int n) const { return tables_.at(static_cast<std::size_t>(n - 1)); }
    NGramTable& ngrams(int n) { return tables_.at(static_cast<std::size_t>(n - 1)); }

    /// Per-order discounts of a trained model; empty for models read from ARPA
    /// files that do not record them.
    const std::vector<double>& discounts() const noexcept { return discounts_; }
    void set_discounts(std::vector<double> d) { discounts_ = std::move(d); }

    /// log10 P(word | context); the context's most recent token is last.
    /// Only the last `order - 1` context tokens are consulted.
    double log_prob(std::span<const WordId> context, WordId word) const;
    double log_prob(std::span<const std::string> context, std::string_view word) const;

  private:
    int order_ = 0;
    std::vector<std::string> words_;
    std::unordered_map<std::string, WordId> ids_;
    std::vector<NGramTable> tables_;
    std::vector<double> discounts_;
};

/// Trains an interpolated Kneser-Ney model with one absolute discount per order,
/// D_n = n1 / (n1 + 2 n2) over the adjusted count-of-counts, clamped to
/// [0.1, 0.9]. Highest-order n-grams and n-grams starting with `<s>` use raw
/// counts; all other lower orders use continuation counts. The unigram level
/// interpolates with a uniform distribution over the vocabulary (minus `<s>`),
/// which is where `<unk>` gets its mass. Tokens seen fewer than `min_count`
/// times are replaced by `<unk>`.
///
/// Throws DataError for an empty corpus and ArgumentError for order < 1.
NGramModel train_lm(const Corpus& corpus, int order = 6, std::size_t min_count = 1);

struct PerplexityResult {
    double log10_prob_sum = 0.0;
    std::size_t token_count = 0;  // includes </s>, excludes <s>
    std::size_t oov_count = 0;
    double perplexity = 1.0;

    /// Per-token cross-entropy in log10 units.
    double cross_entropy() const {
        return token_count ? -log10_prob_sum / static_cast<double>(token_count) : 0.0;
    }
};

PerplexityResult perplexity(const NGramModel& model, const Sentence& sentence);
PerplexityResult perplexity(const NGramModel& model, std::span<const std::string> tokens);
/// Pooled over all sentences.
PerplexityResult perplexity(const NGramModel& model, const Corpus& corpus);

void write_arpa(const NGramModel& model, std::ostream& out);
/// Throws ParseError (position = 1-based line number) on malformed input.
NGramModel read_arpa(std::istream& in);

/// Same order, vocabulary and n-gram set, with values equal within `tolerance`.
bool approx_equal(const NGramModel& a, const NGramModel& b, double tolerance);

}  // namespace corpusforge
