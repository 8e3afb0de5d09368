#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/select.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace corpusforge;
using corpusforge::testing::corpus;
using corpusforge::testing::sent;

namespace {

ProfileOptions small_profile() { return {.lm_order = 3, .edit_sample_size = 200, .seed = 4}; }

std::vector<CriterionScores> random_scores(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0), c(-3.0, 3.0);
    std::vector<CriterionScores> s(n);
    for (auto& x : s) x = {u(rng), c(rng), u(rng)};
    return s;
}

}  // namespace

TEST(SelectionSize, CeilingWithFloor) {
    EXPECT_EQ(selection_size(10, 0.2), 2u);
    EXPECT_EQ(selection_size(11, 0.2), 3u);
    EXPECT_EQ(selection_size(3, 0.1), 1u);
    EXPECT_EQ(selection_size(0, 0.5), 0u);
    EXPECT_EQ(selection_size(2000, 0.2), 400u);
    EXPECT_EQ(selection_size(7, 1.0), 7u);
}

TEST(Combine, HandRankedFiveCandidates) {
    // tf-idf ranks 1.5 3 5 1.5 4; CED ranks 2.5 1 4 2.5 5; edit ranks 3 1 5 4 2
    // mean ranks 7/3 5/3 14/3 8/3 11/3 -> order 1 0 3 4 2
    const std::vector<CriterionScores> s{
        {0.9, -1.0, 0.5}, {0.5, -2.0, 0.9}, {0.1, 0.0, 0.1}, {0.9, -1.0, 0.2}, {0.3, 1.0, 0.7}};
    const auto r = combine_and_resample(s, {.acceptance_rate = 0.4});
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
    EXPECT_DOUBLE_EQ(r.table[0].tfidf_rank, 1.5);
    EXPECT_DOUBLE_EQ(r.table[3].ced_rank, 2.5);
    EXPECT_NEAR(r.table[0].mean_rank, 7.0 / 3, 1e-12);
    EXPECT_NEAR(r.table[2].mean_rank, 14.0 / 3, 1e-12);
    std::vector<std::size_t> combined;
    for (const auto& row : r.table) combined.push_back(row.combined_rank);
    EXPECT_EQ(combined, (std::vector<std::size_t>{2, 1, 5, 3, 4}));
    EXPECT_TRUE(r.table[1].selected);
    EXPECT_FALSE(r.table[3].selected);
}

TEST(Combine, AllTiedKeepsInputOrder) {
    const std::vector<CriterionScores> s(10, {0.5, 0.0, 0.5});
    const auto r = combine_and_resample(s, {.acceptance_rate = 0.2});
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
}

TEST(Combine, WeightsCanSilenceACriterion) {
    // Only the edit criterion counts: candidate 1 has the best edit score.
    const std::vector<CriterionScores> s{{0.9, -5.0, 0.1}, {0.1, 5.0, 0.9}, {0.5, 0.0, 0.5}};
    const auto r = combine_and_resample(s, {.acceptance_rate = 0.1, .weights = {0.0, 0.0, 1.0}});
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{1}));
}

TEST(Combine, FullRateKeepsEverything) {
    std::mt19937_64 rng(2);
    const auto s = random_scores(rng, 37);
    const auto r = combine_and_resample(s, {.acceptance_rate = 1.0});
    std::vector<std::size_t> all(37);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(r.selected, all);
}

TEST(Combine, PermutingTheInputPermutesTheSelection) {
    // Mean ranks travel with their candidates; the kept set can only differ
    // where equal mean ranks straddle the cut, which index order resolves.
    std::mt19937_64 rng(8);
    std::size_t compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_scores(rng, 30);
        std::vector<std::size_t> perm(s.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<CriterionScores> shuffled;
        for (auto p : perm) shuffled.push_back(s[p]);
        const auto a = combine_and_resample(s, {});
        const auto b = combine_and_resample(shuffled, {});
        for (std::size_t i = 0; i < perm.size(); ++i) ASSERT_DOUBLE_EQ(b.table[i].mean_rank, a.table[perm[i]].mean_rank);

        std::vector<double> ranks;
        for (const auto& row : a.table) ranks.push_back(row.mean_rank);
        std::sort(ranks.begin(), ranks.end());
        const std::size_t k = a.selected.size();
        if (ranks[k - 1] == ranks[k]) continue;
        std::vector<std::size_t> mapped;
        for (auto i : b.selected) mapped.push_back(perm[i]);
        std::sort(mapped.begin(), mapped.end());
        ASSERT_EQ(mapped, a.selected) << "trial " << trial;
        ++compared;
    }
    EXPECT_GT(compared, 50u);
}

TEST(Combine, DominatedCandidateChangesNothing) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_scores(rng, 9);
        const auto before = combine_and_resample(s, {});
        s.push_back({-1.0, 10.0, -1.0});  // worst on every criterion
        const auto after = combine_and_resample(s, {});
        ASSERT_EQ(before.selected, after.selected);
    }
}

TEST(Combine, RejectsBadConfig) {
    const std::vector<CriterionScores> s(3);
    EXPECT_THROW(combine_and_resample(s, {.acceptance_rate = 0.0}), ArgumentError);
    EXPECT_THROW(combine_and_resample(s, {.acceptance_rate = 1.5}), ArgumentError);
    EXPECT_THROW(combine_and_resample(s, {.weights = {0.0, 0.0, 0.0}}), ArgumentError);
    EXPECT_THROW(parse_pair_mode("sideways"), ArgumentError);
    EXPECT_EQ(parse_pair_mode("source-side"), PairMode::SourceSide);
    EXPECT_EQ(parse_pair_mode("both-sides-averaged"), PairMode::BothSidesAveraged);
}

TEST(Criteria, EditSimilarityHandValues) {
    const auto p = build_profile(corpus({"a x c"}), corpus({"q r s"}), small_profile());
    EXPECT_NEAR(edit_score(p, sent("a b c")), 2.0 / 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(edit_score(p, sent("a x c")), 1.0);
    EXPECT_DOUBLE_EQ(edit_score(p, sent("q r")), 0.0);
}

TEST(Criteria, TfidfIsScaleInvariantAndBounded) {
    const auto p = build_profile(corpus({"a b", "a c", "d e"}), corpus({"a", "x y"}), small_profile());
    EXPECT_NEAR(tfidf_score(p, sent("a b")), tfidf_score(p, sent("a b a b")), 1e-12);
    EXPECT_DOUBLE_EQ(tfidf_score(p, sent("zz yy")), 0.0);
    EXPECT_DOUBLE_EQ(tfidf_score(p, sent("")), 0.0);
    const double s = tfidf_score(p, sent("a b c d e"));
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
}

TEST(Criteria, SingleSentenceCentroid) {
    // With one in-domain sentence every idf is 1, so the centroid is the unit
    // vector of that sentence and the sentence scores exactly 1.
    const auto p = build_profile(corpus({"a b"}), corpus({"c"}), small_profile());
    EXPECT_NEAR(p.centroid.at("a"), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(tfidf_score(p, sent("a b")), 1.0, 1e-12);
}

TEST(Criteria, IdenticalModelsGiveZeroCed) {
    const Corpus c = corpus({"the cat sat", "a dog ran", "the dog sat down"});
    const auto p = build_profile(c, c, small_profile());
    EXPECT_NEAR(ced_score(p, sent("the cat ran")), 0.0, 1e-12);
    EXPECT_NEAR(ced_score(p, sent("zebra")), 0.0, 1e-12);
}

TEST(Criteria, BuildProfileErrors) {
    EXPECT_THROW(build_profile({}, corpus({"a"})), DataError);
    EXPECT_THROW(build_profile(corpus({"a"}), {}), DataError);
    EXPECT_THROW(build_profile(corpus({""}), corpus({"a"})), DataError);
}

TEST(SelectForLm, RecoversPlantedInDomainSentences) {
    const auto d = corpusforge::testing::planted_domain(300, 1000, 10, 77);
    const auto profile = build_profile(d.in_domain, d.general, small_profile());
    SelectionResult table;
    const auto kept = select_for_lm(d.general, profile, {.acceptance_rate = 0.1}, 2, &table);
    ASSERT_EQ(kept.size(), 100u);
    std::size_t hits = 0;
    for (auto i : table.selected) hits += d.planted[i];
    EXPECT_GE(hits, 90u);

    std::ostringstream out;
    write_score_table(table, out);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "index\ttfidf\tced\tedit\tcombined_rank\tselected");
    EXPECT_THROW(select_for_lm({}, profile, {}), DataError);
}

TEST(SelectForLm, WorkerCountDoesNotMatter) {
    const auto d = corpusforge::testing::planted_domain(100, 300, 5, 3);
    const auto profile = build_profile(d.in_domain, d.general, small_profile());
    std::ostringstream a, b;
    SelectionResult ta, tb;
    select_for_lm(d.general, profile, {}, 1, &ta);
    select_for_lm(d.general, profile, {}, 4, &tb);
    write_score_table(ta, a);
    write_score_table(tb, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(ScorePairs, ModesPickTheRightSide) {
    const auto src = build_profile(corpus({"a b"}), corpus({"z"}), small_profile());
    const auto tgt = build_profile(corpus({"x y"}), corpus({"z"}), small_profile());
    const auto pairs = corpusforge::testing::parallel({{"a b", "q"}, {"q", "x y"}});
    const auto by_source = score_pairs(pairs, PairMode::SourceSide, &src, nullptr);
    const auto by_target = score_pairs(pairs, PairMode::TargetSide, nullptr, &tgt);
    const auto both = score_pairs(pairs, PairMode::BothSidesAveraged, &src, &tgt);
    EXPECT_DOUBLE_EQ(by_source[0].edit, 1.0);
    EXPECT_DOUBLE_EQ(by_target[1].edit, 1.0);
    EXPECT_DOUBLE_EQ(both[0].edit, 0.5);
    EXPECT_DOUBLE_EQ(both[0].tfidf, (by_source[0].tfidf + tfidf_score(tgt, sent("q"))) / 2);
    EXPECT_THROW(score_pairs(pairs, PairMode::TargetSide, &src, nullptr), ArgumentError);
}
