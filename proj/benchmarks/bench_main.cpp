#include <benchmark/benchmark.h>

#include <random>

#include "corpusforge/eval_mt.hpp"
#include "corpusforge/mine.hpp"
#include "corpusforge/ngram_lm.hpp"
#include "corpusforge/select.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace corpusforge;

static void BM_NwAlign(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScoreMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(nw_align(m, -0.1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NwAlign)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

static void BM_MineCollection(benchmark::State& state) {
    static const auto c = testing::synthetic_collection(200, 40, 400, 11);
    static const PairScorer scorer(testing::cipher_lexicon(400), 0.1);
    const MiningConfig config{.workers = static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(mine_collection(c.pairs, scorer, config));
}
BENCHMARK(BM_MineCollection)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_LmSentenceScore(benchmark::State& state) {
    std::mt19937_64 rng(3);
    Corpus train;
    for (int i = 0; i < 5000; ++i) train.push_back(testing::random_sentence(rng, 5, 20, 26));
    const auto model = train_lm(train, 6);
    const auto probe = testing::random_sentence(rng, 20, 20, 26);
    for (auto _ : state) benchmark::DoNotOptimize(perplexity(model, probe));
}
BENCHMARK(BM_LmSentenceScore);

static void BM_SelectionScoring(benchmark::State& state) {
    static const auto d = testing::planted_domain(400, 2000, 5, 29);
    static const auto profile = build_profile(d.in_domain, d.general, {.lm_order = 3, .edit_sample_size = 400});
    for (auto _ : state) benchmark::DoNotOptimize(score_sentences(profile, d.general));
}
BENCHMARK(BM_SelectionScoring)->Unit(benchmark::kMillisecond);

// Hypothesis = reference with a few substitutions and one moved phrase, which
// is what MT output looks like; random small-vocabulary pairs are far costlier.
static void BM_Ter(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto r = testing::random_sentence(rng, len, len, 26);
    std::vector<std::string> h = r.tokens;
    for (std::size_t k = 0; k < len / 8; ++k) h[rng() % len] = "zz";
    h = apply_shift(h, len / 4, 3, len / 2);
    for (auto _ : state) benchmark::DoNotOptimize(ter(std::span<const std::string>(h), r.tokens));
}
BENCHMARK(BM_Ter)->Arg(10)->Arg(25)->Arg(50);
BENCHMARK_MAIN();
