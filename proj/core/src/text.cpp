#include "corpusforge/text.hpp"

#include <algorithm>
#include <unordered_set>

#include "utf8.hpp"

namespace corpusforge {

namespace {

bool is_separator(char32_t cp) { return utf8::is_space(cp) || utf8::is_control(cp); }

bool is_word_char(char32_t cp) { return !is_separator(cp) && !utf8::is_punct(cp); }

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_joiner(char32_t cp) {
    return cp == U'\'' || cp == 0x2019 || cp == U'-' || cp == 0x2010 || cp == 0x2011;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw, const TokenizeProfile& profile) {
    const std::u32string cps = utf8::decode(raw);
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            tokens.push_back(std::move(word));
            word.clear();
        }
    };

    for (std::size_t k = 0; k < cps.size(); ++k) {
        const char32_t cp = cps[k];
        if (is_separator(cp)) {
            flush();
            continue;
        }
        if (utf8::is_punct(cp)) {
            const char32_t prev = k > 0 ? cps[k - 1] : U' ';
            const char32_t next = k + 1 < cps.size() ? cps[k + 1] : U' ';
            const bool internal_joiner = is_joiner(cp) && is_word_char(prev) && is_word_char(next);
            const bool decimal_mark = (cp == U'.' || cp == U',') && is_digit(prev) && is_digit(next);
            if (internal_joiner || decimal_mark) {
                utf8::append(word, cp);
                continue;
            }
            flush();
            std::string punct;
            utf8::append(punct, cp);
            tokens.push_back(std::move(punct));
            continue;
        }
        utf8::append(word, profile.lowercase ? utf8::to_lower(cp) : cp);
    }
    flush();
    return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

bool has_control_chars(std::string_view raw) {
    for (char32_t cp : utf8::decode(raw)) {
        if (cp != U'\t' && utf8::is_control(cp)) return true;
    }
    return false;
}

Sentence Sentence::from_raw(std::string raw, const TokenizeProfile& profile) {
    Sentence s;
    s.tokens = tokenize(raw, profile);
    s.raw = std::move(raw);
    return s;
}

Sentence Sentence::from_tokens(std::vector<std::string> tokens) {
    Sentence s;
    s.raw = join_tokens(tokens);
    s.tokens = std::move(tokens);
    return s;
}

Corpus ParallelCorpus::source_side() const {
    Corpus out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.source);
    return out;
}

Corpus ParallelCorpus::target_side() const {
    Corpus out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.target);
    return out;
}

CleaningResult clean_parallel(const ParallelCorpus& corpus, const CleaningConfig& rules) {
    CleaningResult result;
    auto& report = result.report;
    report.input_pairs = corpus.size();

    std::unordered_set<std::string> seen;
    for (const auto& pair : corpus.pairs) {
        // Unit separator cannot occur inside a token, so the key is unambiguous.
        std::string key = join_tokens(pair.source.tokens);
        key.push_back('\x1f');
        key += join_tokens(pair.target.tokens);
        if (!seen.insert(std::move(key)).second) {
            ++report.dropped_duplicates;
            continue;
        }

        const double ns = static_cast<double>(pair.source.size());
        const double nt = static_cast<double>(pair.target.size());
        if (ns > 0 && nt > 0 && std::max(ns, nt) / std::min(ns, nt) > rules.max_ratio) {
            ++report.dropped_length_ratio;
            continue;
        }

        if (ns == 0 || nt == 0 || has_control_chars(pair.source.raw) ||
            has_control_chars(pair.target.raw)) {
            ++report.dropped_empty_or_control;
            continue;
        }

        result.corpus.pairs.push_back(pair);
        ++report.kept_pairs;
    }
    return result;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    std::unordered_set<std::string_view> forms;
    for (const auto& s : corpus) {
        ++stats.sentences;
        stats.tokens += s.tokens.size();
        for (const auto& t : s.tokens) forms.insert(t);
    }
    stats.unique_tokens = forms.size();
    return stats;
}

ParallelStats corpus_stats(const ParallelCorpus& corpus) {
    return {corpus_stats(corpus.source_side()), corpus_stats(corpus.target_side())};
}

}  // namespace corpusforge
