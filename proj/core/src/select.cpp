#include "corpusforge/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/edit_distance.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/sampling.hpp"

namespace corpusforge {

namespace {

SparseVector term_counts(const Sentence& s) {
    SparseVector tf;
    for (const auto& t : s.tokens) tf[t] += 1.0;
    return tf;
}

double norm(const SparseVector& v) {
    // Sorted summation so the result does not depend on hash order.
    std::vector<double> squares;
    squares.reserve(v.size());
    for (const auto& [k, x] : v) squares.push_back(x * x);
    std::sort(squares.begin(), squares.end());
    return std::sqrt(std::accumulate(squares.begin(), squares.end(), 0.0));
}

}  // namespace

DomainProfile build_profile(const Corpus& in_domain, const Corpus& general, const ProfileOptions& options) {
    if (in_domain.empty()) throw DataError("in-domain corpus is empty");
    if (general.empty()) throw DataError("general corpus is empty");

    DomainProfile profile;

    std::unordered_map<std::string, std::size_t> df;
    for (const auto& s : in_domain) {
        for (const auto& [term, count] : term_counts(s)) ++df[term];
    }
    if (df.empty()) throw DataError("in-domain corpus has no tokens");
    const double n_docs = static_cast<double>(in_domain.size());
    for (const auto& [term, d] : df) profile.idf[term] = 1.0 + std::log(n_docs / static_cast<double>(d));

    SparseVector sum;
    for (const auto& s : in_domain)
        for (const auto& [term, count] : term_counts(s)) sum[term] += count * profile.idf.at(term);
    const double len = norm(sum);
    for (const auto& [term, w] : sum) profile.centroid[term] = w / len;

    profile.in_lm = train_lm(in_domain, options.lm_order);

    std::size_t budget = 0;
    for (const auto& s : in_domain) budget += s.size() + 1;
    Corpus sample;
    std::size_t taken = 0;
    for (std::size_t idx : seeded_permutation(general.size(), options.seed)) {
        if (taken >= budget) break;
        sample.push_back(general[idx]);
        taken += general[idx].size() + 1;
    }
    profile.gen_lm = train_lm(sample, options.lm_order);

    std::vector<std::size_t> ref_idx;
    if (in_domain.size() <= options.edit_sample_size) {
        ref_idx.resize(in_domain.size());
        std::iota(ref_idx.begin(), ref_idx.end(), std::size_t{0});
    } else {
        auto perm = seeded_permutation(in_domain.size(), options.seed ^ 0x9e3779b97f4a7c15ull);
        ref_idx.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(options.edit_sample_size));
        std::sort(ref_idx.begin(), ref_idx.end());
    }
    for (std::size_t idx : ref_idx) {
        std::vector<std::uint32_t> ids;
        for (const auto& t : in_domain[idx].tokens)
            ids.push_back(profile.edit_vocab.emplace(t, static_cast<std::uint32_t>(profile.edit_vocab.size()))
                              .first->second);
        profile.edit_reference.push_back(std::move(ids));
    }
    return profile;
}

double tfidf_score(const DomainProfile& profile, const Sentence& candidate) {
    SparseVector v;
    for (const auto& [term, count] : term_counts(candidate)) {
        const auto it = profile.idf.find(term);
        if (it != profile.idf.end()) v[term] = count * it->second;
    }
    const double len = norm(v);
    if (len == 0.0) return 0.0;
    std::vector<double> products;
    for (const auto& [term, w] : v) {
        const auto it = profile.centroid.find(term);
        if (it != profile.centroid.end()) products.push_back(w * it->second);
    }
    std::sort(products.begin(), products.end());
    const double cosine = std::accumulate(products.begin(), products.end(), 0.0) / len;
    return std::clamp(cosine, 0.0, 1.0);
}

double ced_score(const DomainProfile& profile, const Sentence& candidate) {
    return perplexity(profile.in_lm, candidate).cross_entropy() -
           perplexity(profile.gen_lm, candidate).cross_entropy();
}

double edit_score(const DomainProfile& profile, const Sentence& candidate) {
    constexpr std::uint32_t kUnknown = 0xFFFFFFFFu;
    std::vector<std::uint32_t> ids;
    ids.reserve(candidate.size());
    for (const auto& t : candidate.tokens) {
        const auto it = profile.edit_vocab.find(t);
        ids.push_back(it == profile.edit_vocab.end() ? kUnknown : it->second);
    }
    double best = 0.0;
    for (const auto& ref : profile.edit_reference) {
        const std::size_t longest = std::max(ids.size(), ref.size());
        if (longest == 0) return 1.0;
        const std::size_t len_gap = ids.size() > ref.size() ? ids.size() - ref.size() : ref.size() - ids.size();
        const double bound = 1.0 - static_cast<double>(len_gap) / static_cast<double>(longest);
        if (bound <= best) continue;
        const std::size_t dist =
            levenshtein(std::span<const std::uint32_t>(ids), std::span<const std::uint32_t>(ref));
        best = std::max(best, 1.0 - static_cast<double>(dist) / static_cast<double>(longest));
        if (best == 1.0) break;
    }
    return best;
}

CriterionScores score_candidate(const DomainProfile& profile, const Sentence& candidate) {
    return {tfidf_score(profile, candidate), ced_score(profile, candidate), edit_score(profile, candidate)};
}

std::vector<CriterionScores> score_sentences(const DomainProfile& profile, std::span<const Sentence> sentences,
                                             std::size_t workers) {
    return parallel_map(sentences.size(), workers,
                        [&](std::size_t i) { return score_candidate(profile, sentences[i]); });
}

PairMode parse_pair_mode(std::string_view name) {
    if (name == "source-side") return PairMode::SourceSide;
    if (name == "target-side") return PairMode::TargetSide;
    if (name == "both-sides-averaged" || name == "both") return PairMode::BothSidesAveraged;
    throw ArgumentError("unknown pair mode '" + std::string(name) +
                        "' (expected source-side, target-side or both-sides-averaged)");
}

std::vector<CriterionScores> score_pairs(const ParallelCorpus& pairs, PairMode mode,
                                         const DomainProfile* source_profile,
                                         const DomainProfile* target_profile, std::size_t workers) {
    const bool need_source = mode != PairMode::TargetSide;
    const bool need_target = mode != PairMode::SourceSide;
    if (need_source && !source_profile) throw ArgumentError("pair mode needs a source-side profile");
    if (need_target && !target_profile) throw ArgumentError("pair mode needs a target-side profile");

    return parallel_map(pairs.size(), workers, [&](std::size_t i) {
        const auto& p = pairs.pairs[i];
        if (mode == PairMode::SourceSide) return score_candidate(*source_profile, p.source);
        if (mode == PairMode::TargetSide) return score_candidate(*target_profile, p.target);
        const auto s = score_candidate(*source_profile, p.source);
        const auto t = score_candidate(*target_profile, p.target);
        return CriterionScores{(s.tfidf + t.tfidf) / 2.0, (s.ced + t.ced) / 2.0, (s.edit + t.edit) / 2.0};
    });
}

void SelectionConfig::validate() const {
    if (!(acceptance_rate > 0.0 && acceptance_rate <= 1.0))
        throw ArgumentError("acceptance rate must lie in (0, 1]");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ArgumentError("criterion weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw ArgumentError("at least one criterion weight must be positive");
}

std::size_t selection_size(std::size_t n, double rate) {
    if (n == 0) return 0;
    // The slack absorbs representation error such as 0.7 * 10 = 7.000000000000001.
    const double raw = std::ceil(rate * static_cast<double>(n) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 0.0)), 1, n);
}

namespace {

/// Average ranks (1 = best); `better(a, b)` orders values best-first.
template <class Key, class Better>
std::vector<double> average_ranks(std::size_t n, Key key, Better better) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return better(key(a), key(b)); });
    std::vector<double> ranks(n);
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start + 1;
        while (end < n && key(order[end]) == key(order[start])) ++end;
        const double avg = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t k = start; k < end; ++k) ranks[order[k]] = avg;
        start = end;
    }
    return ranks;
}

}  // namespace

SelectionResult combine_and_resample(std::span<const CriterionScores> scores, const SelectionConfig& config) {
    config.validate();
    const std::size_t n = scores.size();
    const auto tfidf = average_ranks(n, [&](std::size_t i) { return scores[i].tfidf; }, std::greater<double>());
    const auto ced = average_ranks(n, [&](std::size_t i) { return scores[i].ced; }, std::less<double>());
    const auto edit = average_ranks(n, [&](std::size_t i) { return scores[i].edit; }, std::greater<double>());
    const auto& w = config.weights;
    const double weight_sum = w[0] + w[1] + w[2];

    SelectionResult result;
    result.table.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = result.table[i];
        row.index = i;
        row.scores = scores[i];
        row.tfidf_rank = tfidf[i];
        row.ced_rank = ced[i];
        row.edit_rank = edit[i];
        row.mean_rank = (w[0] * tfidf[i] + w[1] * ced[i] + w[2] * edit[i]) / weight_sum;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.table[a].mean_rank < result.table[b].mean_rank;
    });
    const std::size_t keep = selection_size(n, config.acceptance_rate);
    for (std::size_t pos = 0; pos < n; ++pos) {
        auto& row = result.table[order[pos]];
        row.combined_rank = pos + 1;
        row.selected = pos < keep;
        if (row.selected) result.selected.push_back(order[pos]);
    }
    std::sort(result.selected.begin(), result.selected.end());
    return result;
}

Corpus select_for_lm(const Corpus& monolingual, const DomainProfile& profile, const SelectionConfig& config,
                     std::size_t workers, SelectionResult* table) {
    config.validate();
    if (monolingual.empty()) throw DataError("nothing to select from: the corpus is empty");
    const auto scores = score_sentences(profile, monolingual, workers);
    SelectionResult result = combine_and_resample(scores, config);
    Corpus out;
    out.reserve(result.selected.size());
    for (std::size_t i : result.selected) out.push_back(monolingual[i]);
    if (table) *table = std::move(result);
    return out;
}

void write_score_table(const SelectionResult& result, std::ostream& out) {
    out << "index\ttfidf\tced\tedit\tcombined_rank\tselected\n";
    for (const auto& row : result.table) {
        out << row.index << '\t' << format_fixed(row.scores.tfidf, 6) << '\t' << format_fixed(row.scores.ced, 6)
            << '\t' << format_fixed(row.scores.edit, 6) << '\t' << row.combined_rank << '\t'
            << (row.selected ? 1 : 0) << '\n';
    }
}

}  // namespace corpusforge
