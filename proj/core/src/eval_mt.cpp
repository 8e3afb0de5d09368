#include "corpusforge/eval_mt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"

namespace corpusforge {

namespace {

void check_sides(std::span<const Sentence> hypotheses, std::span<const Sentence> references) {
    if (hypotheses.size() != references.size())
        throw DataError("hypothesis and reference counts differ: " + std::to_string(hypotheses.size()) + " vs " +
                        std::to_string(references.size()));
    if (hypotheses.empty()) throw DataError("no segments to evaluate");
}

using NGramCounts = std::unordered_map<std::string, std::size_t>;

// N-gram keys join tokens with a unit separator, which the tokenizer never emits.
std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start, std::size_t n) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
        if (k) key += '\x1f';
        key += tokens[start + k];
    }
    return key;
}

NGramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
    NGramCounts counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[ngram_key(tokens, i, n)];
    return counts;
}

std::size_t clipped_matches(const NGramCounts& hyp, const NGramCounts& ref) {
    std::size_t m = 0;
    for (const auto& [g, c] : hyp) {
        const auto it = ref.find(g);
        if (it != ref.end()) m += std::min(c, it->second);
    }
    return m;
}

}  // namespace

BleuResult bleu(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                const BleuOptions& options) {
    check_sides(hypotheses, references);
    if (options.max_n < 1) throw ArgumentError("BLEU order must be at least 1");
    const auto max_n = static_cast<std::size_t>(options.max_n);

    std::vector<std::size_t> matches(max_n, 0), totals(max_n, 0);
    BleuResult r;
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const auto& h = hypotheses[s].tokens;
        const auto& ref = references[s].tokens;
        r.hypothesis_length += h.size();
        r.reference_length += ref.size();
        for (std::size_t n = 1; n <= max_n; ++n) {
            if (h.size() < n) break;
            totals[n - 1] += h.size() - n + 1;
            matches[n - 1] += clipped_matches(count_ngrams(h, n), count_ngrams(ref, n));
        }
    }

    double log_sum = 0.0;
    bool zero = false;
    for (std::size_t n = 1; n <= max_n; ++n) {
        double p = 0.0;
        if (options.smooth && n >= 2) {
            p = (static_cast<double>(matches[n - 1]) + 1.0) / (static_cast<double>(totals[n - 1]) + 1.0);
        } else if (totals[n - 1] > 0) {
            p = static_cast<double>(matches[n - 1]) / static_cast<double>(totals[n - 1]);
        }
        r.precisions.push_back(p);
        if (p == 0.0) zero = true;
        else log_sum += std::log(p);
    }

    const double c = static_cast<double>(r.hypothesis_length);
    const double len_r = static_cast<double>(r.reference_length);
    if (r.hypothesis_length == 0) r.brevity_penalty = 0.0;
    else r.brevity_penalty = c < len_r ? std::exp(1.0 - len_r / c) : 1.0;

    r.score = zero ? 0.0 : r.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
    return r;
}

double nist(std::span<const Sentence> hypotheses, std::span<const Sentence> references, int max_n,
            std::span<const Sentence> info_references) {
    check_sides(hypotheses, references);
    if (max_n < 1) throw ArgumentError("NIST order must be at least 1");
    const auto order = static_cast<std::size_t>(max_n);
    if (info_references.empty()) info_references = references;

    // counts[n] holds reference n-gram counts; counts[0][""] is the total word count.
    std::vector<NGramCounts> counts(order + 1);
    for (const auto& ref : info_references) {
        counts[0][""] += ref.size();
        for (std::size_t n = 1; n <= order; ++n)
            for (const auto& [g, c] : count_ngrams(ref.tokens, n)) counts[n][g] += c;
    }
    auto info = [&](const std::string& g, std::size_t n) {
        const auto num_it = counts[n].find(g);
        if (num_it == counts[n].end()) return 0.0;
        const std::string prefix = n == 1 ? std::string() : g.substr(0, g.rfind('\x1f'));
        const auto& prefix_counts = counts[n - 1];
        const double den = static_cast<double>(prefix_counts.at(prefix));
        return std::log2(den / static_cast<double>(num_it->second));
    };

    std::vector<double> gained(order, 0.0);
    std::vector<std::size_t> totals(order, 0);
    std::size_t hyp_len = 0, ref_len = 0;
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const auto& h = hypotheses[s].tokens;
        hyp_len += h.size();
        ref_len += references[s].size();
        for (std::size_t n = 1; n <= order; ++n) {
            if (h.size() < n) break;
            totals[n - 1] += h.size() - n + 1;
            const auto ref_counts = count_ngrams(references[s].tokens, n);
            for (const auto& [g, c] : count_ngrams(h, n)) {
                const auto it = ref_counts.find(g);
                if (it != ref_counts.end()) gained[n - 1] += static_cast<double>(std::min(c, it->second)) * info(g, n);
            }
        }
    }

    double score = 0.0;
    for (std::size_t n = 0; n < order; ++n)
        if (totals[n] > 0) score += gained[n] / static_cast<double>(totals[n]);
    if (hyp_len == 0 || score == 0.0) return 0.0;

    const double ratio = ref_len == 0 ? 1.0 : std::min(static_cast<double>(hyp_len) / static_cast<double>(ref_len), 1.0);
    const double log_two_thirds = std::log(2.0 / 3.0);
    const double beta = std::log(0.5) / (log_two_thirds * log_two_thirds);
    const double log_ratio = std::log(ratio);
    return score * std::exp(beta * log_ratio * log_ratio);
}

// --- TER --------------------------------------------------------------------

namespace {

using Ids = std::vector<std::uint32_t>;
constexpr std::size_t kUnaligned = std::numeric_limits<std::size_t>::max();

struct EditAlignment {
    std::size_t distance = 0;
    std::vector<std::size_t> hyp_to_ref;  // exact matches on one optimal path, else kUnaligned
};

EditAlignment align_edits(const Ids& hyp, const Ids& ref) {
    const std::size_t n = hyp.size(), m = ref.size();
    std::vector<std::size_t> d((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
    for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            at(i, j) = std::min({at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1), at(i - 1, j) + 1,
                                 at(i, j - 1) + 1});

    EditAlignment out{at(n, m), std::vector<std::size_t>(n, kUnaligned)};
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1)) {
            if (hyp[i - 1] == ref[j - 1]) out.hyp_to_ref[i - 1] = j - 1;
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            --i;
        } else {
            --j;
        }
    }
    return out;
}

/// Distance only, in one reusable row.
std::size_t edit_distance(const Ids& hyp, const Ids& ref, std::vector<std::size_t>& row) {
    row.resize(ref.size() + 1);
    for (std::size_t j = 0; j <= ref.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= hyp.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({diag + (hyp[i - 1] == ref[j - 1] ? 0 : 1), up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[ref.size()];
}

/// shifted() into a caller-owned buffer.
void shift_into(const Ids& tokens, std::size_t start, std::size_t length, std::size_t dest, Ids& out) {
    out.clear();
    // Position `dest` counts within the sequence with the block removed.
    auto rest_at = [&](std::size_t k) { return k < start ? tokens[k] : tokens[k + length]; };
    for (std::size_t k = 0; k < dest; ++k) out.push_back(rest_at(k));
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start),
               tokens.begin() + static_cast<std::ptrdiff_t>(start + length));
    for (std::size_t k = dest; k + length < tokens.size(); ++k) out.push_back(rest_at(k));
}

template <class T>
std::vector<T> shifted(std::span<const T> tokens, std::size_t start, std::size_t length, std::size_t dest) {
    std::vector<T> rest;
    rest.reserve(tokens.size() - length);
    rest.insert(rest.end(), tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(start));
    rest.insert(rest.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start + length), tokens.end());
    std::vector<T> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(dest));
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start),
               tokens.begin() + static_cast<std::ptrdiff_t>(start + length));
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(dest), rest.end());
    return out;
}

/// A block qualifies when it equals some reference span that it is not
/// already aligned to position by position.
bool shiftable(const Ids& hyp, const Ids& ref, const EditAlignment& alignment, std::size_t start,
               std::size_t length) {
    for (std::size_t j = 0; j + length <= ref.size(); ++j) {
        if (!std::equal(hyp.begin() + static_cast<std::ptrdiff_t>(start),
                        hyp.begin() + static_cast<std::ptrdiff_t>(start + length),
                        ref.begin() + static_cast<std::ptrdiff_t>(j)))
            continue;
        for (std::size_t k = 0; k < length; ++k)
            if (alignment.hyp_to_ref[start + k] != j + k) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> apply_shift(std::span<const std::string> tokens, std::size_t start, std::size_t length,
                                     std::size_t dest) {
    if (length == 0 || start + length > tokens.size() || dest + length > tokens.size())
        throw ArgumentError("shift out of range");
    return shifted(tokens, start, length, dest);
}

TerResult ter(std::span<const std::string> hypothesis, std::span<const std::string> reference,
              const TerOptions& options) {
    std::unordered_map<std::string_view, std::uint32_t> ids;
    auto intern = [&](std::string_view t) {
        return ids.emplace(t, static_cast<std::uint32_t>(ids.size())).first->second;
    };
    Ids hyp, ref;
    for (const auto& t : reference) ref.push_back(intern(t));
    for (const auto& t : hypothesis) hyp.push_back(intern(t));

    TerResult r;
    r.reference_length = ref.size();
    EditAlignment current = align_edits(hyp, ref);
    Ids candidate;
    std::vector<std::size_t> row;
    while (options.shifts && current.distance > 0) {
        std::size_t best = current.distance;
        Ids best_hyp;
        const std::size_t longest = std::min(options.max_shift_size, hyp.size());
        for (std::size_t start = 0; start < hyp.size(); ++start) {
            for (std::size_t length = 1; length <= longest && start + length <= hyp.size(); ++length) {
                if (!shiftable(hyp, ref, current, start, length)) continue;
                for (std::size_t dest = 0; dest + length <= hyp.size(); ++dest) {
                    if (dest == start) continue;
                    shift_into(hyp, start, length, dest, candidate);
                    const std::size_t dist = edit_distance(candidate, ref, row);
                    if (dist < best) {
                        best = dist;
                        best_hyp = candidate;
                    }
                }
            }
        }
        // Strictly lower distance; the shift's own cost keeps the total from rising.
        if (best_hyp.empty()) break;
        hyp = std::move(best_hyp);
        ++r.shifts;
        current = align_edits(hyp, ref);
    }
    r.edits = current.distance + r.shifts;
    r.ter = static_cast<double>(r.edits) / static_cast<double>(std::max<std::size_t>(r.reference_length, 1));
    return r;
}

TerResult ter(const Sentence& hypothesis, const Sentence& reference, const TerOptions& options) {
    return ter(std::span<const std::string>(hypothesis.tokens), std::span<const std::string>(reference.tokens),
               options);
}

TerResult corpus_ter(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                     const TerOptions& options) {
    check_sides(hypotheses, references);
    TerResult total;
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const TerResult seg = ter(hypotheses[s], references[s], options);
        total.edits += seg.edits;
        total.shifts += seg.shifts;
        total.reference_length += seg.reference_length;
    }
    total.ter = static_cast<double>(total.edits) / static_cast<double>(std::max<std::size_t>(total.reference_length, 1));
    return total;
}

// --- reports ----------------------------------------------------------------

DocumentMap read_document_map(std::istream& in, std::size_t segments) {
    DocumentMap map(segments);
    std::vector<bool> seen(segments, false);
    std::size_t lineno = 0;
    for (const auto& line : read_lines(in)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2 || fields[1].empty())
            throw ParseError("document map line " + std::to_string(lineno) + ": expected segment_index<TAB>doc_id",
                             lineno);
        std::size_t index = 0;
        try {
            std::size_t used = 0;
            index = std::stoul(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
        } catch (const std::logic_error&) {
            throw ParseError("document map line " + std::to_string(lineno) + ": bad segment index '" + fields[0] + "'",
                             lineno);
        }
        if (index >= segments)
            throw DataError("document map line " + std::to_string(lineno) + ": segment " + std::to_string(index) +
                            " out of range (" + std::to_string(segments) + " segments)");
        if (seen[index] && map[index] != fields[1])
            throw DataError("segment " + std::to_string(index) + " maps to both '" + map[index] + "' and '" +
                            fields[1] + "'");
        seen[index] = true;
        map[index] = fields[1];
    }
    for (std::size_t s = 0; s < segments; ++s)
        if (!seen[s]) throw DataError("segment " + std::to_string(s) + " is not mapped to a document");
    return map;
}

DocumentMap read_document_map(const std::filesystem::path& path, std::size_t segments) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_document_map(in, segments);
}

EvalReport evaluate(std::span<const Sentence> hypotheses, std::span<const Sentence> references,
                    const std::optional<DocumentMap>& documents, const EvalOptions& options) {
    check_sides(hypotheses, references);
    if (documents && documents->size() != hypotheses.size())
        throw DataError("document map covers " + std::to_string(documents->size()) + " segments, expected " +
                        std::to_string(hypotheses.size()));
    for (std::size_t s = 0; documents && s < documents->size(); ++s)
        if ((*documents)[s].empty()) throw DataError("segment " + std::to_string(s) + " is not mapped to a document");

    auto score = [&](std::string name, std::span<const Sentence> hyp, std::span<const Sentence> ref,
                     BleuResult* detail) {
        MetricRow row;
        row.document = std::move(name);
        row.segments = hyp.size();
        BleuResult b = bleu(hyp, ref, options.bleu);
        row.bleu = b.score;
        row.nist = nist(hyp, ref, options.nist_max_n, references);
        row.ter = corpus_ter(hyp, ref, options.ter).ter;
        if (detail) *detail = std::move(b);
        return row;
    };

    EvalReport report;
    report.corpus = score("ALL", hypotheses, references, &report.bleu_detail);
    if (!documents) return report;

    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t s = 0; s < documents->size(); ++s) members[(*documents)[s]].push_back(s);
    std::vector<std::pair<std::string, std::pair<Corpus, Corpus>>> groups;
    for (const auto& [doc, idx] : members) {
        Corpus h, r;
        for (std::size_t s : idx) {
            h.push_back(hypotheses[s]);
            r.push_back(references[s]);
        }
        groups.emplace_back(doc, std::make_pair(std::move(h), std::move(r)));
    }
    report.documents = parallel_map(groups.size(), options.workers, [&](std::size_t g) {
        return score(groups[g].first, groups[g].second.first, groups[g].second.second, nullptr);
    });
    return report;
}

namespace {

struct TableRow {
    std::string talk, system, bleu, nist, ter;
};

std::vector<TableRow> table_rows(std::span<const SystemReport> systems) {
    std::map<std::string, std::vector<TableRow>> by_doc;
    std::vector<TableRow> all;
    for (const auto& sys : systems) {
        for (const auto& row : sys.report.documents)
            by_doc[row.document].push_back({row.document, sys.system, format_fixed(row.bleu * 100.0, 2),
                                            format_fixed(row.nist, 2), format_fixed(row.ter * 100.0, 2)});
        const auto& c = sys.report.corpus;
        all.push_back({c.document, sys.system, format_fixed(c.bleu * 100.0, 2), format_fixed(c.nist, 2),
                       format_fixed(c.ter * 100.0, 2)});
    }
    std::vector<TableRow> rows;
    for (auto& [doc, r] : by_doc) rows.insert(rows.end(), r.begin(), r.end());
    rows.insert(rows.end(), all.begin(), all.end());
    return rows;
}

}  // namespace

void render_table(std::span<const SystemReport> systems, std::ostream& out) {
    const auto rows = table_rows(systems);
    const std::array<std::string, 5> header{"TALK ID", "SYSTEM", "BLEU", "NIST", "TER"};
    std::array<std::size_t, 5> width{};
    for (std::size_t k = 0; k < 5; ++k) width[k] = header[k].size();
    for (const auto& r : rows) {
        const std::array<const std::string*, 5> f{&r.talk, &r.system, &r.bleu, &r.nist, &r.ter};
        for (std::size_t k = 0; k < 5; ++k) width[k] = std::max(width[k], f[k]->size());
    }
    auto line = [&](const std::array<const std::string*, 5>& f) {
        for (std::size_t k = 0; k < 5; ++k) {
            if (k) out << " | ";
            const std::string pad(width[k] - f[k]->size(), ' ');
            // Text columns are left-aligned, numbers right-aligned.
            if (k < 2) out << *f[k] << (k + 1 < 5 ? pad : "");
            else out << pad << *f[k];
        }
        out << '\n';
    };
    line({&header[0], &header[1], &header[2], &header[3], &header[4]});
    std::size_t total = 3 * 4;
    for (auto w : width) total += w;
    out << std::string(total, '-') << '\n';
    for (const auto& r : rows) line({&r.talk, &r.system, &r.bleu, &r.nist, &r.ter});
}

void write_report_tsv(std::span<const SystemReport> systems, std::ostream& out) {
    out << "talk_id\tsystem\tbleu\tnist\tter\n";
    for (const auto& r : table_rows(systems))
        out << r.talk << '\t' << r.system << '\t' << r.bleu << '\t' << r.nist << '\t' << r.ter << '\n';
}

}  // namespace corpusforge
