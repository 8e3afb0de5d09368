#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corpusforge/text.hpp"
#include "corpusforge/word_align.hpp"

namespace corpusforge {

struct MiningConfig {
    double threshold = 0.5;
    double gap_penalty = -0.1;
    double min_prob = 0.1;
    std::size_t workers = 1;

    /// Throws ArgumentError unless threshold is in [0, 1], gap_penalty <= 0 and workers >= 1.
    /// A threshold above 1 is accepted: it simply mines nothing.
    void validate() const;
};

struct DocumentPair {
    Document source;
    Document target;
};

/// Dense row-major matrix of sentence-pair scores (source rows, target columns).
class ScoreMatrix {
  public:
    ScoreMatrix() = default;
    ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class StepKind { Match, GapSource, GapTarget };

/// For GapSource only `source` is meaningful; for GapTarget only `target`.
struct AlignmentStep {
    StepKind kind;
    std::size_t source;
    std::size_t target;

    friend bool operator==(const AlignmentStep&, const AlignmentStep&) = default;
};

struct AlignmentPath {
    std::vector<AlignmentStep> steps;
    double score = 0.0;

    std::size_t gap_count() const;
};

/// Global (Needleman-Wunsch) alignment of two sentence sequences maximizing
/// the sum of match scores plus gap_penalty per unmatched sentence. The
/// backtrace prefers match, then gap-source, then gap-target on ties.
AlignmentPath nw_align(const ScoreMatrix& scores, double gap_penalty);

/// Sentence-pair similarity from lexical coverage.
///
/// A source token is covered when some target token is its translation with
/// t(target | source) >= min_prob or is the identical string; target tokens
/// are covered symmetrically. The score is the harmonic mean of both coverage
/// fractions times min(|s|, |t|) / max(|s|, |t|), and 0 if either side is empty.
class PairScorer {
  public:
    PairScorer(const TranslationLexicon& lexicon, double min_prob);

    double score(const Sentence& source, const Sentence& target) const;

    /// Token ids in a space shared by both languages; strings unknown to the
    /// lexicon get ids from `extra`, which callers scope to one document pair.
    using ExtraIds = std::unordered_map<std::string, std::uint32_t>;
    std::vector<std::uint32_t> encode(const Sentence& s, ExtraIds& extra) const;
    double score_encoded(std::span<const std::uint32_t> source, std::span<const std::uint32_t> target) const;

    ScoreMatrix score_matrix(const Document& source, const Document& target) const;

  private:
    bool linked(std::uint32_t source, std::uint32_t target) const {
        return links_.contains((static_cast<std::uint64_t>(source) << 32) | target);
    }

    std::unordered_map<std::string, std::uint32_t> ids_;
    std::unordered_set<std::uint64_t> links_;
};

double score_pair(const TranslationLexicon& lexicon, const Sentence& source, const Sentence& target,
                  double min_prob);

struct MinedPair {
    Sentence source;
    Sentence target;
    double similarity = 0.0;
    std::string source_doc;
    std::string target_doc;
    std::size_t source_index = 0;
    std::size_t target_index = 0;
};

/// Aligns the two documents and keeps matched pairs with similarity >= threshold,
/// in document order.
std::vector<MinedPair> mine_document_pair(const DocumentPair& pair, const PairScorer& scorer,
                                          const MiningConfig& config);

struct DocumentYield {
    std::string source_doc;
    std::string target_doc;
    std::size_t source_sentences = 0;
    std::size_t target_sentences = 0;
    std::size_t matches = 0;  // match steps on the optimal path
    std::size_t emitted = 0;
};

struct MiningReport {
    std::size_t document_pairs = 0;
    std::size_t sentence_pairs_scored = 0;
    std::size_t matches = 0;
    std::size_t emitted = 0;
    std::size_t workers = 1;
    double wall_seconds = 0.0;
    std::vector<DocumentYield> per_pair;
};

struct MiningResult {
    std::vector<MinedPair> pairs;
    MiningReport report;

    ParallelCorpus corpus() const;
};

/// Mines every document pair on `config.workers` threads; results are merged
/// in input order so the output is identical for any worker count.
MiningResult mine_collection(std::span<const DocumentPair> pairs, const PairScorer& scorer,
                             const MiningConfig& config);

/// Gold sentence links (source index, target index) of one document pair.
using SentenceLinks = std::set<std::pair<std::size_t, std::size_t>>;

struct GoldDocument {
    DocumentPair pair;
    SentenceLinks links;
};

struct GridPoint {
    double threshold = 0.0;
    double gap_penalty = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct TuningResult {
    double best_threshold = 0.0;
    double best_gap_penalty = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::vector<GridPoint> grid;  // threshold-major, in grid order
};

std::vector<double> default_threshold_grid();
std::vector<double> default_penalty_grid();

/// Grid search over (threshold, gap penalty) maximizing micro-averaged F1 of
/// mined sentence links against gold links. Precision with nothing mined is 0.
/// Ties go to the lower threshold, then the less negative penalty.
TuningResult tune(std::span<const GoldDocument> gold, const PairScorer& scorer,
                  std::span<const double> thresholds, std::span<const double> penalties,
                  std::size_t workers = 1);

// --- file formats -----------------------------------------------------------

/// `similarity<TAB>source<TAB>target`, similarity with 6 decimals, sentences as
/// space-joined tokens.
void write_mined_tsv(std::span<const MinedPair> pairs, std::ostream& out);

/// Line-oriented key=value report. Wall time is included only with `timing`,
/// which keeps the default report byte-reproducible.
void write_mining_report(const MiningReport& report, std::ostream& out, bool timing = false);

/// Document file: one sentence per line; the id is the file stem.
Document read_document(const std::filesystem::path& path, const TokenizeProfile& profile = {});

/// Manifest TSV `source_doc_path<TAB>target_doc_path`; relative paths resolve
/// against the manifest's directory.
std::vector<DocumentPair> read_manifest(const std::filesystem::path& manifest,
                                        const TokenizeProfile& profile = {});

/// Gold TSV `doc_id<TAB>i<TAB>j` keyed by source document id.
std::map<std::string, SentenceLinks> read_gold(std::istream& in);
void write_gold(const std::map<std::string, SentenceLinks>& gold, std::ostream& out);

}  // namespace corpusforge
