#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge {

/// t(target word | source word) table. The reserved source word `NULL`
/// generates target words that have no source counterpart.
class TranslationLexicon {
  public:
    static constexpr std::string_view kNull = "NULL";

    using Row = std::unordered_map<std::string, double>;

    /// 0 when the pair is absent.
    double prob(std::string_view source, std::string_view target) const;
    void set(const std::string& source, const std::string& target, double p);

    const std::unordered_map<std::string, Row>& rows() const noexcept { return rows_; }
    const Row* row(std::string_view source) const;
    std::size_t entry_count() const;
    bool empty() const noexcept { return rows_.empty(); }

    /// t(w | w) = 1 for each word; the lexicon of a language paired with itself.
    static TranslationLexicon identity(const std::vector<std::string>& words);

  private:
    std::unordered_map<std::string, Row> rows_;
};

struct Model1Result {
    TranslationLexicon lexicon;
    /// Natural-log corpus likelihood after each EM iteration (up to a constant).
    std::vector<double> log_likelihoods;
};

struct Model1Options {
    std::size_t iterations = 10;
    std::size_t workers = 1;
};

/// IBM Model 1 EM from a uniform start. The expectation step runs over fixed
/// shards of the corpus and partial counts are reduced in shard order, so the
/// lexicon is bit-identical for any worker count. Throws DataError on an empty
/// corpus and ArgumentError for zero iterations.
Model1Result train_model1(const ParallelCorpus& corpus, const Model1Options& options = {});

struct Link {
    std::size_t source = 0;
    std::size_t target = 0;

    friend auto operator<=>(const Link&, const Link&) = default;
};

using AlignmentLinks = std::set<Link>;

/// Each target position links to the source position with the highest
/// t(target | source); NULL competes as position -1 and wins ties, and
/// NULL-linked targets get no link. Ties among real words go to the
/// smallest source index.
AlignmentLinks viterbi_align(const TranslationLexicon& lexicon, const Sentence& source,
                             const Sentence& target);

/// Swaps source and target in every link.
AlignmentLinks transpose(const AlignmentLinks& links);

enum class SymmetrizeHeuristic { Intersection, Union, GrowDiag };

SymmetrizeHeuristic parse_heuristic(std::string_view name);
std::string_view to_string(SymmetrizeHeuristic h);

/// Combines forward (source->target) links with backward links already given in
/// source->target orientation. GrowDiag starts from the intersection and adds
/// union links in the 8-neighbourhood of current links whose source or target
/// word is still unaligned, sweeping current links in row-major order until
/// nothing changes. Throws ArgumentError for links outside the dimensions.
AlignmentLinks symmetrize(const AlignmentLinks& forward, const AlignmentLinks& backward,
                          SymmetrizeHeuristic heuristic, std::size_t source_len,
                          std::size_t target_len);

/// `source<TAB>target<TAB>prob`, sorted by source then descending probability.
void write_lexicon(const TranslationLexicon& lexicon, std::ostream& out);
TranslationLexicon read_lexicon(std::istream& in);

/// Pharaoh-style "i-j i-j ..." rendering.
std::string format_links(const AlignmentLinks& links);

}  // namespace corpusforge
