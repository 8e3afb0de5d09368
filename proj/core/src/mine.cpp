#include "corpusforge/mine.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"

namespace corpusforge {

void MiningConfig::validate() const {
    if (!(threshold >= 0.0)) throw ArgumentError("threshold must be >= 0");
    if (!(gap_penalty <= 0.0)) throw ArgumentError("gap penalty must be <= 0");
    if (!(min_prob >= 0.0 && min_prob <= 1.0)) throw ArgumentError("min-prob must lie in [0, 1]");
    if (workers < 1) throw ArgumentError("workers must be >= 1");
}

std::size_t AlignmentPath::gap_count() const {
    return static_cast<std::size_t>(std::count_if(
        steps.begin(), steps.end(), [](const AlignmentStep& s) { return s.kind != StepKind::Match; }));
}

AlignmentPath nw_align(const ScoreMatrix& scores, double gap_penalty) {
    const std::size_t n = scores.rows();
    const std::size_t m = scores.cols();
    const std::size_t width = m + 1;
    std::vector<double> table((n + 1) * width);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return table[i * width + j]; };

    at(0, 0) = 0.0;
    for (std::size_t j = 1; j <= m; ++j) at(0, j) = at(0, j - 1) + gap_penalty;
    for (std::size_t i = 1; i <= n; ++i) {
        at(i, 0) = at(i - 1, 0) + gap_penalty;
        for (std::size_t j = 1; j <= m; ++j) {
            const double match = at(i - 1, j - 1) + scores(i - 1, j - 1);
            const double gap_source = at(i - 1, j) + gap_penalty;
            const double gap_target = at(i, j - 1) + gap_penalty;
            at(i, j) = std::max({match, gap_source, gap_target});
        }
    }

    AlignmentPath path;
    path.score = at(n, m);
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + scores(i - 1, j - 1)) {
            path.steps.push_back({StepKind::Match, i - 1, j - 1});
            --i;
            --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + gap_penalty) {
            path.steps.push_back({StepKind::GapSource, i - 1, j});
            --i;
        } else {
            path.steps.push_back({StepKind::GapTarget, i, j - 1});
            --j;
        }
    }
    std::reverse(path.steps.begin(), path.steps.end());
    return path;
}

PairScorer::PairScorer(const TranslationLexicon& lexicon, double min_prob) {
    auto intern = [this](const std::string& w) {
        return ids_.emplace(w, static_cast<std::uint32_t>(ids_.size())).first->second;
    };
    std::vector<std::string> sources;
    for (const auto& [source, row] : lexicon.rows()) sources.push_back(source);
    std::sort(sources.begin(), sources.end());
    for (const auto& source : sources) {
        if (source == TranslationLexicon::kNull) continue;
        const auto* row = lexicon.row(source);
        std::vector<std::string> targets;
        for (const auto& [target, p] : *row)
            if (p >= min_prob) targets.push_back(target);
        if (targets.empty()) continue;
        std::sort(targets.begin(), targets.end());
        const std::uint32_t e = intern(source);
        for (const auto& target : targets) {
            const std::uint32_t f = intern(target);
            links_.insert((static_cast<std::uint64_t>(e) << 32) | f);
        }
    }
}

std::vector<std::uint32_t> PairScorer::encode(const Sentence& s, ExtraIds& extra) const {
    std::vector<std::uint32_t> out;
    out.reserve(s.size());
    for (const auto& tok : s.tokens) {
        if (auto it = ids_.find(tok); it != ids_.end()) {
            out.push_back(it->second);
            continue;
        }
        const auto next = static_cast<std::uint32_t>(ids_.size() + extra.size());
        out.push_back(extra.emplace(tok, next).first->second);
    }
    return out;
}

double PairScorer::score_encoded(std::span<const std::uint32_t> source,
                                 std::span<const std::uint32_t> target) const {
    if (source.empty() || target.empty()) return 0.0;
    std::size_t covered_source = 0;
    for (auto e : source) {
        for (auto f : target) {
            if (e == f || linked(e, f)) {
                ++covered_source;
                break;
            }
        }
    }
    std::size_t covered_target = 0;
    for (auto f : target) {
        for (auto e : source) {
            if (e == f || linked(e, f)) {
                ++covered_target;
                break;
            }
        }
    }
    const double a = static_cast<double>(covered_source) / static_cast<double>(source.size());
    const double b = static_cast<double>(covered_target) / static_cast<double>(target.size());
    if (a + b == 0.0) return 0.0;
    const double harmonic = 2.0 * a * b / (a + b);
    const double ratio = static_cast<double>(std::min(source.size(), target.size())) /
                         static_cast<double>(std::max(source.size(), target.size()));
    return harmonic * ratio;
}

double PairScorer::score(const Sentence& source, const Sentence& target) const {
    ExtraIds extra;
    const auto s = encode(source, extra);
    const auto t = encode(target, extra);
    return score_encoded(s, t);
}

ScoreMatrix PairScorer::score_matrix(const Document& source, const Document& target) const {
    ExtraIds extra;
    std::vector<std::vector<std::uint32_t>> src;
    std::vector<std::vector<std::uint32_t>> tgt;
    src.reserve(source.sentences.size());
    tgt.reserve(target.sentences.size());
    for (const auto& s : source.sentences) src.push_back(encode(s, extra));
    for (const auto& t : target.sentences) tgt.push_back(encode(t, extra));
    ScoreMatrix m(src.size(), tgt.size());
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = 0; j < tgt.size(); ++j) m(i, j) = score_encoded(src[i], tgt[j]);
    return m;
}

double score_pair(const TranslationLexicon& lexicon, const Sentence& source, const Sentence& target,
                  double min_prob) {
    return PairScorer(lexicon, min_prob).score(source, target);
}

namespace {

struct DocumentMining {
    std::vector<MinedPair> pairs;
    DocumentYield yield;
};

DocumentMining mine_one(const DocumentPair& pair, const PairScorer& scorer, const MiningConfig& config) {
    DocumentMining out;
    const ScoreMatrix scores = scorer.score_matrix(pair.source, pair.target);
    const AlignmentPath path = nw_align(scores, config.gap_penalty);
    out.yield = {pair.source.id, pair.target.id, scores.rows(), scores.cols(), 0, 0};
    for (const auto& step : path.steps) {
        if (step.kind != StepKind::Match) continue;
        ++out.yield.matches;
        const double sim = scores(step.source, step.target);
        if (sim < config.threshold) continue;
        out.pairs.push_back({pair.source.sentences[step.source], pair.target.sentences[step.target], sim,
                             pair.source.id, pair.target.id, step.source, step.target});
    }
    out.yield.emitted = out.pairs.size();
    return out;
}

}  // namespace

std::vector<MinedPair> mine_document_pair(const DocumentPair& pair, const PairScorer& scorer,
                                          const MiningConfig& config) {
    config.validate();
    return mine_one(pair, scorer, config).pairs;
}

ParallelCorpus MiningResult::corpus() const {
    ParallelCorpus c;
    c.pairs.reserve(pairs.size());
    for (const auto& p : pairs) c.pairs.push_back({p.source, p.target});
    return c;
}

MiningResult mine_collection(std::span<const DocumentPair> pairs, const PairScorer& scorer,
                             const MiningConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    auto per_doc = parallel_map(pairs.size(), config.workers,
                                [&](std::size_t i) { return mine_one(pairs[i], scorer, config); });

    MiningResult result;
    auto& report = result.report;
    report.document_pairs = pairs.size();
    report.workers = config.workers;
    for (auto& doc : per_doc) {
        report.sentence_pairs_scored += doc.yield.source_sentences * doc.yield.target_sentences;
        report.matches += doc.yield.matches;
        report.emitted += doc.yield.emitted;
        report.per_pair.push_back(std::move(doc.yield));
        std::move(doc.pairs.begin(), doc.pairs.end(), std::back_inserter(result.pairs));
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<double> default_threshold_grid() {
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<double> default_penalty_grid() { return {-0.05, -0.1, -0.2, -0.4, -0.8}; }

TuningResult tune(std::span<const GoldDocument> gold, const PairScorer& scorer,
                  std::span<const double> thresholds, std::span<const double> penalties,
                  std::size_t workers) {
    if (gold.empty()) throw DataError("tuning needs at least one gold document pair");
    if (thresholds.empty() || penalties.empty()) throw ArgumentError("tuning grids must be non-empty");
    for (double g : penalties)
        if (!(g <= 0.0)) throw ArgumentError("gap penalties must be <= 0");

    std::size_t gold_total = 0;
    for (const auto& doc : gold) {
        for (const auto& [i, j] : doc.links) {
            if (i >= doc.pair.source.sentences.size() || j >= doc.pair.target.sentences.size()) {
                throw DataError("gold link " + std::to_string(i) + "-" + std::to_string(j) +
                                " is outside document pair '" + doc.pair.source.id + "'");
            }
        }
        gold_total += doc.links.size();
    }

    const auto matrices = parallel_map(gold.size(), workers, [&](std::size_t d) {
        return scorer.score_matrix(gold[d].pair.source, gold[d].pair.target);
    });

    struct Tally {
        std::size_t emitted = 0;
        std::size_t correct = 0;
    };
    // tallies[t][g]
    std::vector<std::vector<Tally>> tallies(thresholds.size(), std::vector<Tally>(penalties.size()));
    for (std::size_t g = 0; g < penalties.size(); ++g) {
        const auto paths = parallel_map(gold.size(), workers,
                                        [&](std::size_t d) { return nw_align(matrices[d], penalties[g]); });
        for (std::size_t d = 0; d < gold.size(); ++d) {
            for (const auto& step : paths[d].steps) {
                if (step.kind != StepKind::Match) continue;
                const double sim = matrices[d](step.source, step.target);
                const bool hit = gold[d].links.contains({step.source, step.target});
                for (std::size_t t = 0; t < thresholds.size(); ++t) {
                    if (sim < thresholds[t]) continue;
                    ++tallies[t][g].emitted;
                    if (hit) ++tallies[t][g].correct;
                }
            }
        }
    }

    TuningResult result;
    bool have_best = false;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        for (std::size_t g = 0; g < penalties.size(); ++g) {
            const Tally& c = tallies[t][g];
            GridPoint pt;
            pt.threshold = thresholds[t];
            pt.gap_penalty = penalties[g];
            pt.precision = c.emitted ? static_cast<double>(c.correct) / static_cast<double>(c.emitted) : 0.0;
            pt.recall = gold_total ? static_cast<double>(c.correct) / static_cast<double>(gold_total) : 0.0;
            pt.f1 = pt.precision + pt.recall > 0.0
                        ? 2.0 * pt.precision * pt.recall / (pt.precision + pt.recall)
                        : 0.0;
            result.grid.push_back(pt);

            const bool better =
                !have_best || pt.f1 > result.f1 ||
                (pt.f1 == result.f1 &&
                 (pt.threshold < result.best_threshold ||
                  (pt.threshold == result.best_threshold && pt.gap_penalty > result.best_gap_penalty)));
            if (better) {
                have_best = true;
                result.best_threshold = pt.threshold;
                result.best_gap_penalty = pt.gap_penalty;
                result.precision = pt.precision;
                result.recall = pt.recall;
                result.f1 = pt.f1;
            }
        }
    }
    return result;
}

void write_mined_tsv(std::span<const MinedPair> pairs, std::ostream& out) {
    for (const auto& p : pairs) {
        out << format_fixed(p.similarity, 6) << '\t' << join_tokens(p.source.tokens) << '\t'
            << join_tokens(p.target.tokens) << '\n';
    }
}

void write_mining_report(const MiningReport& report, std::ostream& out, bool timing) {
    out << "document_pairs=" << report.document_pairs << '\n';
    out << "sentence_pairs_scored=" << report.sentence_pairs_scored << '\n';
    out << "matches=" << report.matches << '\n';
    out << "pairs_emitted=" << report.emitted << '\n';
    if (timing) {
        out << "workers=" << report.workers << '\n';
        out << "wall_seconds=" << format_fixed(report.wall_seconds, 6) << '\n';
    }
    for (const auto& y : report.per_pair) {
        out << "pair=" << y.source_doc << '|' << y.target_doc << " source_sentences=" << y.source_sentences
            << " target_sentences=" << y.target_sentences << " matches=" << y.matches
            << " emitted=" << y.emitted << '\n';
    }
}

Document read_document(const std::filesystem::path& path, const TokenizeProfile& profile) {
    Document doc;
    doc.id = path.stem().string();
    if (doc.id.empty()) throw DataError("document path '" + path.string() + "' has no usable id");
    for (auto& line : read_lines(path)) doc.sentences.push_back(Sentence::from_raw(std::move(line), profile));
    return doc;
}

std::vector<DocumentPair> read_manifest(const std::filesystem::path& manifest, const TokenizeProfile& profile) {
    const auto base = manifest.parent_path();
    std::vector<DocumentPair> pairs;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(manifest)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2) {
            throw ParseError(manifest.string() + " line " + std::to_string(lineno) +
                                 ": expected source_doc_path<TAB>target_doc_path",
                             lineno);
        }
        auto resolve = [&](const std::string& p) {
            const std::filesystem::path path(p);
            return path.is_absolute() ? path : base / path;
        };
        pairs.push_back({read_document(resolve(fields[0]), profile), read_document(resolve(fields[1]), profile)});
    }
    return pairs;
}

std::map<std::string, SentenceLinks> read_gold(std::istream& in) {
    std::map<std::string, SentenceLinks> gold;
    std::size_t lineno = 0;
    auto parse_index = [&](const std::string& s) {
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
            throw ParseError("gold line " + std::to_string(lineno) + ": bad index '" + s + "'", lineno);
        return v;
    };
    for (const auto& line : read_lines(in)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError("gold line " + std::to_string(lineno) + ": expected doc_id<TAB>i<TAB>j", lineno);
        gold[fields[0]].insert({parse_index(fields[1]), parse_index(fields[2])});
    }
    return gold;
}

void write_gold(const std::map<std::string, SentenceLinks>& gold, std::ostream& out) {
    for (const auto& [doc, links] : gold)
        for (const auto& [i, j] : links) out << doc << '\t' << i << '\t' << j << '\n';
}

}  // namespace corpusforge
