#pragma once

// Synthetic comparable-corpus fixtures shared by tests, the acceptance suite
// and the benchmarks.

#include <random>
#include <string>
#include <vector>

#include "corpusforge/mine.hpp"
#include "corpusforge/word_align.hpp"

namespace corpusforge::testing {

inline std::string source_word(std::size_t i) { return "s" + std::to_string(i); }
inline std::string target_word(std::size_t i) { return "t" + std::to_string(i); }

/// t(t_i | s_i) = 0.9 plus a weak distractor entry per word.
inline TranslationLexicon cipher_lexicon(std::size_t vocab) {
    TranslationLexicon lex;
    for (std::size_t i = 0; i < vocab; ++i) {
        lex.set(source_word(i), target_word(i), 0.9);
        lex.set(source_word(i), target_word((i + 1) % vocab), 0.05);
    }
    return lex;
}

struct SyntheticCollection {
    std::vector<DocumentPair> pairs;
    /// Planted translation links per document pair.
    std::vector<SentenceLinks> links;
};

/// Each source sentence is translated into the target document with
/// probability `translated`; unrelated target sentences are interleaved.
inline SyntheticCollection synthetic_collection(std::size_t documents, std::size_t sentences, std::size_t vocab,
                                                std::uint64_t seed, double translated = 0.6) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1), len(6, 14);
    std::bernoulli_distribution keep(translated), noise(0.3);
    auto make = [&](std::vector<std::size_t>& ids) {
        ids.resize(len(rng));
        for (auto& w : ids) w = word(rng);
    };
    SyntheticCollection c;
    for (std::size_t d = 0; d < documents; ++d) {
        DocumentPair pair;
        pair.source.id = "doc" + std::to_string(d);
        pair.target.id = pair.source.id;
        SentenceLinks links;
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < sentences; ++i) {
            make(ids);
            std::vector<std::string> src;
            for (auto w : ids) src.push_back(source_word(w));
            pair.source.sentences.push_back(Sentence::from_tokens(src));
            while (noise(rng)) {
                std::vector<std::size_t> other;
                make(other);
                std::vector<std::string> tgt;
                for (auto w : other) tgt.push_back(target_word(w));
                pair.target.sentences.push_back(Sentence::from_tokens(tgt));
            }
            if (keep(rng)) {
                std::vector<std::string> tgt;
                for (auto w : ids) tgt.push_back(target_word(w));
                links.insert({i, pair.target.sentences.size()});
                pair.target.sentences.push_back(Sentence::from_tokens(tgt));
            }
        }
        c.pairs.push_back(std::move(pair));
        c.links.push_back(std::move(links));
    }
    return c;
}

struct PlantedDomain {
    Corpus in_domain;
    Corpus general;
    std::vector<bool> planted;  // per general sentence
};

/// In-domain text and planted general sentences draw from a 20-word vocabulary
/// "d*"; the rest of the general pool uses 60 words "g*". Both share a few
/// function words, so the populations overlap lexically but stay separable.
inline PlantedDomain planted_domain(std::size_t in_size, std::size_t general_size, std::size_t every,
                                    std::uint64_t seed) {
    static const std::vector<std::string> shared{"the", "of", "and", "a", "to"};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(5, 12), domain_word(0, 19), general_word(0, 59);
    std::bernoulli_distribution function_word(0.15);
    auto make = [&](char prefix) {
        std::vector<std::string> tokens;
        for (std::size_t n = len(rng); n > 0; --n) {
            if (function_word(rng)) tokens.push_back(shared[rng() % shared.size()]);
            else tokens.push_back(std::string(1, prefix) +
                                  std::to_string(prefix == 'd' ? domain_word(rng) : general_word(rng)));
        }
        return Sentence::from_tokens(std::move(tokens));
    };
    PlantedDomain d;
    for (std::size_t i = 0; i < in_size; ++i) d.in_domain.push_back(make('d'));
    for (std::size_t i = 0; i < general_size; ++i) {
        const bool in = i % every == every - 1;
        d.general.push_back(make(in ? 'd' : 'g'));
        d.planted.push_back(in);
    }
    return d;
}

}  // namespace corpusforge::testing
