#include "corpusforge/word_align.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"

namespace corpusforge {

double TranslationLexicon::prob(std::string_view source, std::string_view target) const {
    const Row* r = row(source);
    if (!r) return 0.0;
    const auto it = r->find(std::string(target));
    return it == r->end() ? 0.0 : it->second;
}

void TranslationLexicon::set(const std::string& source, const std::string& target, double p) {
    rows_[source][target] = p;
}

const TranslationLexicon::Row* TranslationLexicon::row(std::string_view source) const {
    const auto it = rows_.find(std::string(source));
    return it == rows_.end() ? nullptr : &it->second;
}

std::size_t TranslationLexicon::entry_count() const {
    std::size_t n = 0;
    for (const auto& [s, r] : rows_) n += r.size();
    return n;
}

TranslationLexicon TranslationLexicon::identity(const std::vector<std::string>& words) {
    TranslationLexicon lex;
    for (const auto& w : words) lex.set(w, w, 1.0);
    return lex;
}

namespace {

using Id = std::uint32_t;

constexpr std::size_t kShardSize = 64;

struct Interner {
    std::map<std::string, Id> ids;  // ordered so ids do not depend on corpus order
    std::vector<std::string> words;

    void collect(const std::string& w) { ids.emplace(w, 0); }
    void freeze() {
        Id next = 0;
        for (auto& [w, id] : ids) {
            id = next++;
            words.push_back(w);
        }
    }
    Id at(const std::string& w) const { return ids.at(w); }
};

// Co-occurrence table in compressed-row form: row e lists the target ids seen
// with source id e; every (e, f) pair owns one slot of the parameter vector.
struct Cooccurrence {
    std::vector<std::size_t> offsets;
    std::vector<Id> targets;

    std::size_t slot(Id e, Id f) const {
        const auto begin = targets.begin() + static_cast<std::ptrdiff_t>(offsets[e]);
        const auto end = targets.begin() + static_cast<std::ptrdiff_t>(offsets[e + 1]);
        return static_cast<std::size_t>(std::lower_bound(begin, end, f) - targets.begin());
    }
};

struct EncodedPair {
    std::vector<Id> source;  // position 0 is NULL
    std::vector<Id> target;
};

}  // namespace

Model1Result train_model1(const ParallelCorpus& corpus, const Model1Options& options) {
    if (corpus.empty()) throw DataError("cannot train Model 1 on an empty corpus");
    if (options.iterations == 0) throw ArgumentError("Model 1 needs at least one iteration");

    Interner src;
    Interner tgt;
    src.collect(std::string(TranslationLexicon::kNull));
    for (const auto& p : corpus.pairs) {
        for (const auto& w : p.source.tokens) src.collect(w);
        for (const auto& w : p.target.tokens) tgt.collect(w);
    }
    src.freeze();
    tgt.freeze();
    const Id null_id = src.at(std::string(TranslationLexicon::kNull));

    std::vector<EncodedPair> pairs;
    pairs.reserve(corpus.size());
    std::vector<std::vector<Id>> rows(src.words.size());
    for (const auto& p : corpus.pairs) {
        EncodedPair enc;
        enc.source.push_back(null_id);
        for (const auto& w : p.source.tokens) enc.source.push_back(src.at(w));
        for (const auto& w : p.target.tokens) enc.target.push_back(tgt.at(w));
        if (!enc.target.empty())
            for (Id e : enc.source) rows[e].insert(rows[e].end(), enc.target.begin(), enc.target.end());
        pairs.push_back(std::move(enc));
    }

    Cooccurrence cooc;
    cooc.offsets.push_back(0);
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        cooc.targets.insert(cooc.targets.end(), r.begin(), r.end());
        cooc.offsets.push_back(cooc.targets.size());
        r = {};
    }

    const std::size_t n_params = cooc.targets.size();
    std::vector<double> t(n_params, tgt.words.empty() ? 0.0 : 1.0 / static_cast<double>(tgt.words.size()));

    struct ShardResult {
        std::vector<double> counts;
        double log_likelihood = 0.0;
    };
    const std::size_t n_shards = (pairs.size() + kShardSize - 1) / kShardSize;
    const std::size_t wave = std::max<std::size_t>(1, options.workers);

    auto expectation = [&](std::size_t shard) {
        ShardResult out;
        out.counts.assign(n_params, 0.0);
        std::vector<std::size_t> slots;
        std::vector<double> probs;
        const std::size_t end = std::min(pairs.size(), (shard + 1) * kShardSize);
        for (std::size_t k = shard * kShardSize; k < end; ++k) {
            const auto& p = pairs[k];
            const double uniform_align = 1.0 / static_cast<double>(p.source.size());
            for (Id f : p.target) {
                slots.clear();
                probs.clear();
                double denom = 0.0;
                for (Id e : p.source) {
                    const std::size_t s = cooc.slot(e, f);
                    slots.push_back(s);
                    probs.push_back(t[s]);
                    denom += t[s];
                }
                out.log_likelihood += std::log(denom * uniform_align);
                for (std::size_t i = 0; i < slots.size(); ++i) out.counts[slots[i]] += probs[i] / denom;
            }
        }
        return out;
    };

    Model1Result result;
    std::vector<double> counts(n_params);
    for (std::size_t it = 0; it <= options.iterations; ++it) {
        std::fill(counts.begin(), counts.end(), 0.0);
        double ll = 0.0;
        for (std::size_t first = 0; first < n_shards; first += wave) {
            const std::size_t batch = std::min(wave, n_shards - first);
            auto partials = parallel_map(batch, options.workers,
                                         [&](std::size_t i) { return expectation(first + i); });
            for (const auto& part : partials) {
                for (std::size_t s = 0; s < n_params; ++s) counts[s] += part.counts[s];
                ll += part.log_likelihood;
            }
        }
        if (it > 0) result.log_likelihoods.push_back(ll);
        if (it == options.iterations) break;

        for (std::size_t e = 0; e + 1 < cooc.offsets.size(); ++e) {
            double total = 0.0;
            for (std::size_t s = cooc.offsets[e]; s < cooc.offsets[e + 1]; ++s) total += counts[s];
            if (total <= 0.0) continue;
            for (std::size_t s = cooc.offsets[e]; s < cooc.offsets[e + 1]; ++s) t[s] = counts[s] / total;
        }
    }

    for (std::size_t e = 0; e + 1 < cooc.offsets.size(); ++e) {
        for (std::size_t s = cooc.offsets[e]; s < cooc.offsets[e + 1]; ++s)
            result.lexicon.set(src.words[e], tgt.words[cooc.targets[s]], t[s]);
    }
    return result;
}

AlignmentLinks viterbi_align(const TranslationLexicon& lexicon, const Sentence& source,
                             const Sentence& target) {
    AlignmentLinks links;
    const auto* null_row = lexicon.row(TranslationLexicon::kNull);
    std::vector<const TranslationLexicon::Row*> rows;
    rows.reserve(source.size());
    for (const auto& e : source.tokens) rows.push_back(lexicon.row(e));

    auto lookup = [](const TranslationLexicon::Row* row, const std::string& f) {
        if (!row) return 0.0;
        const auto it = row->find(f);
        return it == row->end() ? 0.0 : it->second;
    };

    for (std::size_t j = 0; j < target.size(); ++j) {
        const auto& f = target.tokens[j];
        double best = lookup(null_row, f);
        std::optional<std::size_t> best_i;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double p = lookup(rows[i], f);
            if (p > best) {
                best = p;
                best_i = i;
            }
        }
        if (best_i) links.insert({*best_i, j});
    }
    return links;
}

AlignmentLinks transpose(const AlignmentLinks& links) {
    AlignmentLinks out;
    for (const auto& l : links) out.insert({l.target, l.source});
    return out;
}

SymmetrizeHeuristic parse_heuristic(std::string_view name) {
    if (name == "intersection") return SymmetrizeHeuristic::Intersection;
    if (name == "union") return SymmetrizeHeuristic::Union;
    if (name == "grow-diag") return SymmetrizeHeuristic::GrowDiag;
    throw ArgumentError("unknown symmetrization heuristic '" + std::string(name) +
                        "' (expected intersection, union or grow-diag)");
}

std::string_view to_string(SymmetrizeHeuristic h) {
    switch (h) {
        case SymmetrizeHeuristic::Intersection:
            return "intersection";
        case SymmetrizeHeuristic::Union:
            return "union";
        case SymmetrizeHeuristic::GrowDiag:
            return "grow-diag";
    }
    return "?";
}

AlignmentLinks symmetrize(const AlignmentLinks& forward, const AlignmentLinks& backward,
                          SymmetrizeHeuristic heuristic, std::size_t source_len,
                          std::size_t target_len) {
    for (const auto* set : {&forward, &backward}) {
        for (const auto& l : *set) {
            if (l.source >= source_len || l.target >= target_len) {
                throw ArgumentError("link " + std::to_string(l.source) + "-" + std::to_string(l.target) +
                                    " outside a " + std::to_string(source_len) + "x" +
                                    std::to_string(target_len) + " sentence pair");
            }
        }
    }

    AlignmentLinks inter;
    std::set_intersection(forward.begin(), forward.end(), backward.begin(), backward.end(),
                          std::inserter(inter, inter.end()));
    AlignmentLinks uni;
    std::set_union(forward.begin(), forward.end(), backward.begin(), backward.end(),
                   std::inserter(uni, uni.end()));

    if (heuristic == SymmetrizeHeuristic::Intersection) return inter;
    if (heuristic == SymmetrizeHeuristic::Union) return uni;

    std::vector<char> grid(source_len * target_len, 0);
    std::vector<std::size_t> source_links(source_len, 0);
    std::vector<std::size_t> target_links(target_len, 0);
    auto add = [&](std::size_t i, std::size_t j) {
        grid[i * target_len + j] = 1;
        ++source_links[i];
        ++target_links[j];
    };
    for (const auto& l : inter) add(l.source, l.target);

    static constexpr int kNeighbours[8][2] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1},
                                              {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    bool added = true;
    while (added) {
        added = false;
        for (std::size_t i = 0; i < source_len; ++i) {
            for (std::size_t j = 0; j < target_len; ++j) {
                if (!grid[i * target_len + j]) continue;
                for (const auto& d : kNeighbours) {
                    const auto ni = static_cast<std::ptrdiff_t>(i) + d[0];
                    const auto nj = static_cast<std::ptrdiff_t>(j) + d[1];
                    if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(source_len) ||
                        nj >= static_cast<std::ptrdiff_t>(target_len))
                        continue;
                    const auto si = static_cast<std::size_t>(ni);
                    const auto sj = static_cast<std::size_t>(nj);
                    if (grid[si * target_len + sj] || !uni.contains({si, sj})) continue;
                    if (source_links[si] == 0 || target_links[sj] == 0) {
                        add(si, sj);
                        added = true;
                    }
                }
            }
        }
    }

    AlignmentLinks out;
    for (std::size_t i = 0; i < source_len; ++i)
        for (std::size_t j = 0; j < target_len; ++j)
            if (grid[i * target_len + j]) out.insert({i, j});
    return out;
}

void write_lexicon(const TranslationLexicon& lexicon, std::ostream& out) {
    std::vector<std::string> sources;
    for (const auto& [s, r] : lexicon.rows()) sources.push_back(s);
    std::sort(sources.begin(), sources.end());
    for (const auto& s : sources) {
        std::vector<std::pair<std::string, double>> entries(lexicon.row(s)->begin(), lexicon.row(s)->end());
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (const auto& [t, p] : entries) out << s << '\t' << t << '\t' << format_exact(p) << '\n';
    }
}

TranslationLexicon read_lexicon(std::istream& in) {
    TranslationLexicon lex;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(in)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        double p = 0;
        const auto& num = fields.size() == 3 ? fields[2] : std::string();
        const auto res = std::from_chars(num.data(), num.data() + num.size(), p);
        if (fields.size() != 3 || res.ec != std::errc() || res.ptr != num.data() + num.size() || p < 0) {
            throw ParseError("lexicon line " + std::to_string(lineno) +
                                 ": expected source<TAB>target<TAB>probability",
                             lineno);
        }
        lex.set(fields[0], fields[1], p);
    }
    return lex;
}

std::string format_links(const AlignmentLinks& links) {
    std::string out;
    for (const auto& l : links) {
        if (!out.empty()) out.push_back(' ');
        out += std::to_string(l.source) + "-" + std::to_string(l.target);
    }
    return out;
}

}  // namespace corpusforge
