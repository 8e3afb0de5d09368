#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge {

struct BleuOptions {
    int max_n = 4;
    /// Add-one smoothing of the precisions for n >= 2.
    bool smooth = false;
};

struct BleuResult {
    double score = 0.0;  // in [0, 1]
    std::vector<double> precisions;
    double brevity_penalty = 0.0;
    std::size_t hypothesis_length = 0;
    std::size_t reference_length = 0;
};

/// Corpus BLEU from counts pooled over all segments. Throws DataError when the
/// sides differ in length or there are no segments.
BleuResult bleu(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                const BleuOptions& options = {});

/// Corpus NIST. Information weights come from n-gram counts of `info_references`
/// (the whole reference corpus when omitted).
double nist(std::span<const Sentence> hypotheses, std::span<const Sentence> references, int max_n = 5,
            std::span<const Sentence> info_references = {});

struct TerResult {
    std::size_t edits = 0;   // insertions + deletions + substitutions + shifts
    std::size_t shifts = 0;
    std::size_t reference_length = 0;
    double ter = 0.0;        // edits / max(reference_length, 1)
};

struct TerOptions {
    bool shifts = true;
    /// Longest block considered for a shift.
    std::size_t max_shift_size = 10;
};

/// Greedy-shift TER: while some block shift lowers the word edit distance by
/// more than the shift itself costs, apply the one leaving the smallest distance.
/// A candidate block must equal some reference span it is not already aligned to.
TerResult ter(std::span<const std::string> hypothesis, std::span<const std::string> reference,
              const TerOptions& options = {});
TerResult ter(const Sentence& hypothesis, const Sentence& reference, const TerOptions& options = {});

/// Sum of segment edits over sum of reference lengths (denominator at least 1).
TerResult corpus_ter(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                     const TerOptions& options = {});

/// Moves hyp[start, start+length) so that it begins at `dest` of the sequence
/// with the block removed.
std::vector<std::string> apply_shift(std::span<const std::string> tokens, std::size_t start, std::size_t length,
                                     std::size_t dest);

struct EvalOptions {
    BleuOptions bleu;
    int nist_max_n = 5;
    TerOptions ter;
    std::size_t workers = 1;
};

struct MetricRow {
    std::string document;
    std::size_t segments = 0;
    double bleu = 0.0;  // fractions; rendering multiplies BLEU and TER by 100
    double nist = 0.0;
    double ter = 0.0;
};

struct EvalReport {
    MetricRow corpus;
    BleuResult bleu_detail;
    std::vector<MetricRow> documents;  // sorted by document id
};

/// Segment index -> document id.
using DocumentMap = std::vector<std::string>;

/// TSV `segment_index<TAB>doc_id`. Every segment in [0, segments) must be mapped
/// exactly once; anything else throws DataError.
DocumentMap read_document_map(std::istream& in, std::size_t segments);
DocumentMap read_document_map(const std::filesystem::path& path, std::size_t segments);

/// Corpus metrics plus, with a map, per-document metrics over each document's segments.
EvalReport evaluate(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                    const std::optional<DocumentMap>& documents = std::nullopt, const EvalOptions& options = {});

struct SystemReport {
    std::string system;
    EvalReport report;
};

/// Aligned text table `TALK ID | SYSTEM | BLEU | NIST | TER`, one row per
/// document and system plus an ALL row per system.
void render_table(std::span<const SystemReport> systems, std::ostream& out);

/// The same rows as TSV.
void write_report_tsv(std::span<const SystemReport> systems, std::ostream& out);

}  // namespace corpusforge
