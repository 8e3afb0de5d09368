#include "corpusforge/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "corpusforge/error.hpp"

namespace corpusforge {

NGramModel::NGramModel(int order) : order_(order), tables_(static_cast<std::size_t>(order)) {
    if (order < 1) throw ArgumentError("n-gram order must be >= 1, got " + std::to_string(order));
}

std::optional<WordId> NGramModel::find(std::string_view word) const {
    const auto it = ids_.find(std::string(word));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

WordId NGramModel::lookup(std::string_view word) const {
    if (auto id = find(word)) return *id;
    if (auto unk = find(kUnk)) return *unk;
    return kNoWord;
}

WordId NGramModel::add_word(std::string word) {
    if (auto id = find(word)) return *id;
    const auto id = static_cast<WordId>(words_.size());
    ids_.emplace(word, id);
    words_.push_back(std::move(word));
    return id;
}

double NGramModel::log_prob(std::span<const WordId> context, WordId word) const {
    thread_local std::vector<WordId> key;
    const std::size_t max_len =
        std::min(context.size(), static_cast<std::size_t>(std::max(order_ - 1, 0)));
    double backoff = 0.0;
    for (std::size_t len = max_len;; --len) {
        key.assign(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
        key.push_back(word);
        const auto& table = tables_[len];
        if (auto it = table.find(key); it != table.end()) return backoff + it->second.log_prob;
        if (len == 0) return backoff + kLogZero;
        key.pop_back();
        const auto& ctx_table = tables_[len - 1];
        if (auto it = ctx_table.find(key); it != ctx_table.end()) backoff += it->second.log_backoff;
    }
}

double NGramModel::log_prob(std::span<const std::string> context, std::string_view word) const {
    std::vector<WordId> ids;
    ids.reserve(context.size());
    for (const auto& w : context) ids.push_back(lookup(w));
    return log_prob(ids, lookup(word));
}

namespace {

using Counts = std::unordered_map<std::vector<WordId>, std::uint64_t, WordIdsHash>;

double kn_discount(const Counts& adjusted) {
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    for (const auto& [gram, count] : adjusted) {
        if (count == 1) ++n1;
        if (count == 2) ++n2;
    }
    const double denom = static_cast<double>(n1) + 2.0 * static_cast<double>(n2);
    const double d = denom > 0 ? static_cast<double>(n1) / denom : 0.0;
    return std::clamp(d, 0.1, 0.9);
}

struct ContextStats {
    std::uint64_t total = 0;  // sum of adjusted counts of the context's extensions
    std::uint64_t types = 0;  // number of distinct extensions
};

}  // namespace

NGramModel train_lm(const Corpus& corpus, int order, std::size_t min_count) {
    if (order < 1) throw ArgumentError("n-gram order must be >= 1, got " + std::to_string(order));
    if (corpus.empty()) throw DataError("cannot train a language model on an empty corpus");

    std::map<std::string, std::uint64_t> freq;
    for (const auto& s : corpus)
        for (const auto& t : s.tokens) ++freq[t];

    // Ids follow sorted word order so the model does not depend on corpus order.
    std::set<std::string> vocab{std::string(NGramModel::kBos), std::string(NGramModel::kEos),
                                std::string(NGramModel::kUnk)};
    for (const auto& [word, count] : freq)
        if (count >= min_count) vocab.insert(word);

    NGramModel model(order);
    for (const auto& w : vocab) model.add_word(w);
    const WordId bos = *model.find(NGramModel::kBos);
    const WordId eos = *model.find(NGramModel::kEos);

    const auto n_orders = static_cast<std::size_t>(order);
    std::vector<Counts> raw(n_orders);
    std::vector<WordId> seq;
    std::vector<WordId> gram;
    for (const auto& s : corpus) {
        seq.assign(1, bos);
        for (const auto& t : s.tokens) seq.push_back(model.lookup(t));
        seq.push_back(eos);
        for (std::size_t k = 1; k < seq.size(); ++k) {
            for (std::size_t n = 1; n <= n_orders && n <= k + 1; ++n) {
                gram.assign(seq.begin() + static_cast<std::ptrdiff_t>(k + 1 - n),
                            seq.begin() + static_cast<std::ptrdiff_t>(k + 1));
                ++raw[n - 1][gram];
            }
        }
    }

    // Adjusted counts: raw at the top order and for <s>-initial n-grams,
    // continuation counts N1+(. g) elsewhere.
    std::vector<Counts> adjusted(n_orders);
    adjusted[n_orders - 1] = raw[n_orders - 1];
    for (std::size_t n = n_orders - 1; n >= 1; --n) {
        Counts& adj = adjusted[n - 1];
        for (const auto& [g, c] : raw[n - 1])
            if (g.front() == bos) adj[g] = c;
        // <s> only occurs first, so a suffix never starts with it.
        for (const auto& [g, c] : raw[n]) ++adj[std::vector<WordId>(g.begin() + 1, g.end())];
    }

    std::vector<double> discounts(n_orders);
    for (std::size_t n = 1; n <= n_orders; ++n) discounts[n - 1] = kn_discount(adjusted[n - 1]);
    model.set_discounts(discounts);

    // Uniform base distribution over everything that can be predicted.
    const double uniform = 1.0 / static_cast<double>(model.vocabulary_size() - 1);

    for (std::size_t n = 1; n <= n_orders; ++n) {
        const Counts& adj = adjusted[n - 1];
        const double d = discounts[n - 1];
        std::unordered_map<std::vector<WordId>, ContextStats, WordIdsHash> contexts;
        for (const auto& [g, c] : adj) {
            auto& st = contexts[std::vector<WordId>(g.begin(), g.end() - 1)];
            st.total += c;
            ++st.types;
        }
        NGramTable& table = model.ngrams(static_cast<int>(n));

        if (n == 1) {
            const ContextStats st = contexts[{}];
            const double total = static_cast<double>(st.total);
            const double gamma = total > 0 ? d * static_cast<double>(st.types) / total : 1.0;
            for (WordId w = 0; w < model.vocabulary_size(); ++w) {
                if (w == bos) {
                    table[{w}].log_prob = kLogZero;
                    continue;
                }
                double p = gamma * uniform;
                if (auto it = adj.find({w}); it != adj.end() && total > 0)
                    p += (static_cast<double>(it->second) - d) / total;
                table[{w}].log_prob = std::log10(p);
            }
            continue;
        }

        NGramTable& lower = model.ngrams(static_cast<int>(n - 1));
        for (const auto& [ctx, st] : contexts) {
            const double gamma = d * static_cast<double>(st.types) / static_cast<double>(st.total);
            lower.at(ctx).log_backoff = std::log10(gamma);
        }
        for (const auto& [g, c] : adj) {
            const std::vector<WordId> ctx(g.begin(), g.end() - 1);
            const ContextStats& st = contexts.at(ctx);
            const double total = static_cast<double>(st.total);
            const double gamma = d * static_cast<double>(st.types) / total;
            const std::span<const WordId> shorter(ctx.begin() + 1, ctx.end());
            const double lower_p = std::pow(10.0, model.log_prob(shorter, g.back()));
            const double p = (static_cast<double>(c) - d) / total + gamma * lower_p;
            table[g].log_prob = std::log10(p);
        }
    }
    return model;
}

PerplexityResult perplexity(const NGramModel& model, std::span<const std::string> tokens) {
    PerplexityResult r;
    std::vector<WordId> history;
    history.reserve(tokens.size() + 2);
    history.push_back(model.lookup(NGramModel::kBos));
    const std::size_t keep = static_cast<std::size_t>(std::max(model.order() - 1, 0));
    auto score = [&](WordId w) {
        const std::size_t len = std::min(history.size(), keep);
        r.log10_prob_sum +=
            model.log_prob(std::span<const WordId>(history.end() - static_cast<std::ptrdiff_t>(len),
                                                   history.end()),
                           w);
        ++r.token_count;
        history.push_back(w);
    };
    for (const auto& t : tokens) {
        if (!model.in_vocabulary(t)) ++r.oov_count;
        score(model.lookup(t));
    }
    score(model.lookup(NGramModel::kEos));
    r.perplexity = std::pow(10.0, -r.log10_prob_sum / static_cast<double>(r.token_count));
    return r;
}

PerplexityResult perplexity(const NGramModel& model, const Sentence& sentence) {
    return perplexity(model, std::span<const std::string>(sentence.tokens));
}

PerplexityResult perplexity(const NGramModel& model, const Corpus& corpus) {
    PerplexityResult total;
    for (const auto& s : corpus) {
        const auto r = perplexity(model, s);
        total.log10_prob_sum += r.log10_prob_sum;
        total.token_count += r.token_count;
        total.oov_count += r.oov_count;
    }
    total.perplexity = total.token_count
                           ? std::pow(10.0, -total.log10_prob_sum / static_cast<double>(total.token_count))
                           : 1.0;
    return total;
}

bool approx_equal(const NGramModel& a, const NGramModel& b, double tolerance) {
    if (a.order() != b.order()) return false;
    std::set<std::string> wa(a.words().begin(), a.words().end());
    std::set<std::string> wb(b.words().begin(), b.words().end());
    if (wa != wb) return false;
    for (int n = 1; n <= a.order(); ++n) {
        const auto& ta = a.ngrams(n);
        const auto& tb = b.ngrams(n);
        if (ta.size() != tb.size()) return false;
        std::vector<WordId> key;
        for (const auto& [gram, entry] : ta) {
            key.clear();
            for (WordId id : gram) key.push_back(*b.find(a.word(id)));
            const auto it = tb.find(key);
            if (it == tb.end()) return false;
            if (std::abs(it->second.log_prob - entry.log_prob) > tolerance) return false;
            if (std::abs(it->second.log_backoff - entry.log_backoff) > tolerance) return false;
        }
    }
    return true;
}

}  // namespace corpusforge
