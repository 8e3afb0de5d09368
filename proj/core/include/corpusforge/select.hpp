#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusforge/ngram_lm.hpp"
#include "corpusforge/text.hpp"

namespace corpusforge {

using SparseVector = std::unordered_map<std::string, double>;

/// Everything needed to score general-domain text for in-domain relevance.
struct DomainProfile {
    /// idf(w) = 1 + ln(N / df(w)) with each in-domain sentence as a document.
    SparseVector idf;
    /// L2-normalized sum of the in-domain sentences' tf-idf vectors.
    SparseVector centroid;
    NGramModel in_lm;
    NGramModel gen_lm;
    /// Reference sentences for the edit-distance criterion, as ids into `edit_vocab`.
    std::vector<std::vector<std::uint32_t>> edit_reference;
    std::unordered_map<std::string, std::uint32_t> edit_vocab;
};

struct ProfileOptions {
    int lm_order = 6;
    std::size_t edit_sample_size = 2000;
    std::uint64_t seed = 1;
};

/// Builds the tf-idf centroid, an in-domain LM, a general LM trained on a
/// seeded sample of `general` with the same token count (counting `</s>`) as
/// the in-domain corpus, and a seeded edit-distance reference sample.
/// Throws DataError when either corpus is empty or the in-domain corpus has no tokens.
DomainProfile build_profile(const Corpus& in_domain, const Corpus& general, const ProfileOptions& options = {});

/// Cosine between the candidate's tf-idf vector and the centroid, in [0, 1].
double tfidf_score(const DomainProfile& profile, const Sentence& candidate);

/// Cross-entropy difference H_in - H_gen in log10 units; lower is more in-domain.
double ced_score(const DomainProfile& profile, const Sentence& candidate);

/// max over references r of 1 - lev(candidate, r) / max(|candidate|, |r|).
double edit_score(const DomainProfile& profile, const Sentence& candidate);

struct CriterionScores {
    double tfidf = 0.0;
    double ced = 0.0;
    double edit = 0.0;
};

CriterionScores score_candidate(const DomainProfile& profile, const Sentence& candidate);

/// Scores every sentence on `workers` threads; results are in input order.
std::vector<CriterionScores> score_sentences(const DomainProfile& profile, std::span<const Sentence> sentences,
                                             std::size_t workers = 1);

enum class PairMode { SourceSide, TargetSide, BothSidesAveraged };

PairMode parse_pair_mode(std::string_view name);

/// Scores sentence pairs by one side or by the average of both sides' criteria.
/// The profile for any side the mode needs must be non-null.
std::vector<CriterionScores> score_pairs(const ParallelCorpus& pairs, PairMode mode,
                                         const DomainProfile* source_profile,
                                         const DomainProfile* target_profile, std::size_t workers = 1);

struct SelectionConfig {
    double acceptance_rate = 0.20;
    PairMode pair_mode = PairMode::TargetSide;
    /// Weights of the tf-idf, CED and edit ranks in the combined mean rank.
    std::array<double, 3> weights{1.0, 1.0, 1.0};

    void validate() const;
};

struct ScoredCandidate {
    std::size_t index = 0;
    CriterionScores scores;
    double tfidf_rank = 0.0;  // average rank among ties, 1 = best
    double ced_rank = 0.0;
    double edit_rank = 0.0;
    double mean_rank = 0.0;
    std::size_t combined_rank = 0;  // 1-based position in the combined order
    bool selected = false;
};

struct SelectionResult {
    std::vector<ScoredCandidate> table;  // input order
    std::vector<std::size_t> selected;   // input indices, ascending
};

/// Number kept for `n` candidates: ceil(rate * n), at least 1 when n > 0.
std::size_t selection_size(std::size_t n, double rate);

/// Ranks each criterion (tf-idf and edit descending, CED ascending), orders
/// candidates by weighted mean rank with input index breaking ties, and keeps
/// the first `selection_size` of that order.
SelectionResult combine_and_resample(std::span<const CriterionScores> scores, const SelectionConfig& config);

/// Selection over monolingual sentences; the kept sentences stay in input order.
Corpus select_for_lm(const Corpus& monolingual, const DomainProfile& profile, const SelectionConfig& config,
                     std::size_t workers = 1, SelectionResult* table = nullptr);

/// `index<TAB>tfidf<TAB>ced<TAB>edit<TAB>combined_rank<TAB>selected`.
void write_score_table(const SelectionResult& result, std::ostream& out);

}  // namespace corpusforge
