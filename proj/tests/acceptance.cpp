// Acceptance suite: one line per criterion, `PASS`, `FAIL`, `PARTIAL` or `N/A`.
// The exit status is non-zero only when some criterion FAILs; PARTIAL and N/A
// lines say exactly what was and was not established.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "corpusforge/eval_mt.hpp"
#include "corpusforge/mine.hpp"
#include "corpusforge/ngram_lm.hpp"
#include "corpusforge/select.hpp"
#include "corpusforge/word_align.hpp"
#include "support.hpp"
#include "synthetic.hpp"
#include "ter_oracle.hpp"

using namespace corpusforge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { Pass, Fail, Partial, NotApplicable };

struct Verdict {
    Status status;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int decimals = 3) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(decimals);
    s << v;
    return s.str();
}

Verdict check(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

// ---------------------------------------------------------------------------

Verdict reproducibility_statement() {
    return {Status::NotApplicable,
            "published BLEU/NIST/TER tables need full SMT training and a decoder; replaced by the "
            "property and oracle checks below"};
}

double brute_nw(const ScoreMatrix& m, double gap, std::size_t i, std::size_t j, double acc) {
    // Accumulates from the start, like the DP, so equal paths give bit-equal sums.
    if (i == m.rows() && j == m.cols()) return acc;
    double best = -1e300;
    if (i < m.rows() && j < m.cols()) best = std::max(best, brute_nw(m, gap, i + 1, j + 1, acc + m(i, j)));
    if (i < m.rows()) best = std::max(best, brute_nw(m, gap, i + 1, j, acc + gap));
    if (j < m.cols()) best = std::max(best, brute_nw(m, gap, i, j + 1, acc + gap));
    return best;
}
Verdict nw_optimality() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2016);
    std::uniform_real_distribution<double> u(0.0, 1.0), g(0.0, 1.0);
    std::size_t exact = 0, trials = 120;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
        ScoreMatrix m(t < 10 ? 8 : r, t < 10 ? 8 : c);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = u(rng);
        const double gap = -g(rng);
        exact += nw_align(m, gap).score == brute_nw(m, gap, 0, 0, 0.0);
    }
    const double secs = seconds_since(start);
    return check(exact == trials && secs < 10.0,
                 std::to_string(exact) + "/" + std::to_string(trials) + " matrices exact, " + fmt(secs) + " s");
}

std::string mined_bytes(const std::vector<DocumentPair>& pairs, const PairScorer& scorer, std::size_t workers,
                        double* seconds) {
    const auto start = Clock::now();
    const auto r = mine_collection(pairs, scorer, {.workers = workers});
    if (seconds) *seconds = seconds_since(start);
    std::ostringstream out;
    write_mined_tsv(r.pairs, out);
    write_mining_report(r.report, out);
    return out.str();
}

Verdict mining_determinism() {
    const auto start = Clock::now();
    const auto c = testing::synthetic_collection(200, 40, 400, 11);
    const PairScorer scorer(testing::cipher_lexicon(400), 0.1);
    double t1 = 0.0, t4 = 0.0;
    const std::string reference = mined_bytes(c.pairs, scorer, 1, &t1);
    bool identical = true;
    for (std::size_t w : {2, 4, 8}) identical &= mined_bytes(c.pairs, scorer, w, w == 4 ? &t4 : nullptr) == reference;
    const unsigned cores = std::thread::hardware_concurrency();
    std::string detail = std::string(identical ? "identical" : "DIFFERENT") + " output for 1/2/4/8 workers on 200 pairs";
    const double total = seconds_since(start);
    detail += ", " + fmt(total) + " s; 1 worker " + fmt(t1) + " s, 4 workers " + fmt(t4) + " s";
    if (!identical || total > 120.0) return {Status::Fail, detail};
    if (cores < 4)
        return {Status::Partial, detail + "; speedup not assessable on a " + std::to_string(cores) +
                                     "-core host (needs >= 4)"};
    return check(t4 <= 0.5 * t1, detail + ", speedup " + fmt(t1 / t4, 2) + "x");
}

Verdict tuning_recovery() {
    const auto c = testing::synthetic_collection(30, 15, 200, 23);
    const PairScorer scorer(testing::cipher_lexicon(200), 0.1);
    const MiningConfig planted{.threshold = 0.4, .gap_penalty = -0.2};
    std::vector<GoldDocument> gold;
    for (const auto& p : c.pairs) {
        GoldDocument g{p, {}};
        for (const auto& m : mine_document_pair(p, scorer, planted)) g.links.insert({m.source_index, m.target_index});
        gold.push_back(std::move(g));
    }
    const auto th = default_threshold_grid();
    const auto pe = default_penalty_grid();
    const auto r = tune(gold, scorer, th, pe);
    std::vector<double> th2, pe2;
    for (double t : th) th2.insert(th2.end(), {t, t});
    for (double p : pe) pe2.insert(pe2.end(), {p, p});
    const auto dup = tune(gold, scorer, th2, pe2, 4);
    const bool stable = dup.best_threshold == r.best_threshold && dup.best_gap_penalty == r.best_gap_penalty;
    return check(r.f1 == 1.0 && stable, "best F1 " + fmt(r.f1, 6) + " at threshold " + fmt(r.best_threshold, 2) +
                                            ", penalty " + fmt(r.best_gap_penalty, 2) + "; duplicated grid " +
                                            (stable ? "agrees" : "DISAGREES"));
}

Verdict lm_correctness() {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    std::size_t contexts = 0;
    for (int trial = 0; trial < 120; ++trial) {
        Corpus c;
        const std::size_t vocab = 2 + rng() % 6;
        for (std::size_t n = 1 + rng() % 20; n > 0; --n) c.push_back(testing::random_sentence(rng, 0, 8, vocab));
        const int order = 2 + static_cast<int>(rng() % 3);
        const auto m = train_lm(c, order);
        std::vector<std::vector<WordId>> ctx{{}};
        for (int n = 1; n < order; ++n)
            for (const auto& [gram, e] : m.ngrams(n)) ctx.push_back(gram);
        const auto bos = m.lookup("<s>");
        for (const auto& h : ctx) {
            double sum = 0.0;
            for (WordId v = 0; v < m.vocabulary_size(); ++v)
                if (v != bos) sum += std::pow(10.0, m.log_prob(h, v));
            worst = std::max(worst, std::abs(sum - 1.0));
            ++contexts;
        }
    }
    // Bigram fixture {"a b", "a b", "a c"}: hand-derived interpolated KN values.
    const auto f = train_lm(testing::corpus({"a b", "a b", "a c"}), 2);
    auto p = [&](std::vector<std::string> h, const char* w) {
        return std::pow(10.0, f.log_prob(std::span<const std::string>(h), w));
    };
    const double fixture_err = std::max({std::abs(p({}, "a") - 0.176), std::abs(p({"a"}, "b") - 5.352 / 9),
                                         std::abs(p({"<s>"}, "a") - 8.176 / 9), std::abs(p({"b"}, "</s>") - 0.896),
                                         std::abs(p({"b"}, "a") - 0.176 / 6)});
    Corpus big;
    for (int i = 0; i < 60; ++i) big.push_back(testing::random_sentence(rng, 1, 10, 8));
    const auto m = train_lm(big, 4);
    std::stringstream arpa;
    write_arpa(m, arpa);
    const bool round_trip = approx_equal(m, read_arpa(arpa), 1e-6);
    return check(worst <= 1e-6 && fixture_err <= 1e-9 && round_trip,
                 std::to_string(contexts) + " contexts over 120 corpora, max |sum-1| " + fmt(worst * 1e9, 3) +
                     "e-9; fixture max error " + fmt(fixture_err * 1e12, 3) + "e-12; ARPA round trip " +
                     (round_trip ? "lossless" : "LOSSY"));
}

Verdict model1() {
    std::mt19937_64 rng(17);
    bool monotone = true;
    for (int trial = 0; trial < 40; ++trial) {
        ParallelCorpus c;
        for (std::size_t n = 3 + rng() % 25; n > 0; --n)
            c.pairs.push_back({testing::random_sentence(rng, 1, 7, 6), testing::random_sentence(rng, 1, 7, 6)});
        const auto r = train_model1(c, {.iterations = 15});
        for (std::size_t i = 1; i < r.log_likelihoods.size(); ++i)
            monotone &= r.log_likelihoods[i] >= r.log_likelihoods[i - 1] - 1e-9;
    }
    const auto r = train_model1(testing::parallel({{"a b", "x y"}, {"a", "x"}}), {.iterations = 10});
    const bool converged = r.lexicon.prob("a", "x") > r.lexicon.prob("a", "y") &&
                           r.lexicon.prob("b", "y") > r.lexicon.prob("b", "x");
    return check(monotone && converged, std::string("log-likelihood ") + (monotone ? "monotone" : "DECREASED") +
                                            " on 40 corpora x 15 iterations; fixture t(x|a)=" +
                                            fmt(r.lexicon.prob("a", "x")) + " t(y|b)=" + fmt(r.lexicon.prob("b", "y")));
}

Verdict selection() {
    const auto d = testing::planted_domain(400, 2000, 5, 29);
    const auto profile = build_profile(d.in_domain, d.general, {.lm_order = 3, .edit_sample_size = 400, .seed = 1});
    SelectionResult table;
    const auto kept = select_for_lm(d.general, profile, {.acceptance_rate = 0.20}, 1, &table);
    std::size_t hits = 0;
    for (auto i : table.selected) hits += d.planted[i];
    const double recall = static_cast<double>(hits) / 400.0;

    const std::vector<CriterionScores> five{
        {0.9, -1.0, 0.5}, {0.5, -2.0, 0.9}, {0.1, 0.0, 0.1}, {0.9, -1.0, 0.2}, {0.3, 1.0, 0.7}};
    const auto r = combine_and_resample(five, {.acceptance_rate = 0.4});
    std::vector<std::size_t> ranks;
    for (const auto& row : r.table) ranks.push_back(row.combined_rank);
    const bool oracle = ranks == std::vector<std::size_t>{2, 1, 5, 3, 4} && r.selected == std::vector<std::size_t>{0, 1};
    return check(kept.size() == 400 && recall >= 0.9 && oracle,
                 std::to_string(kept.size()) + " of 2000 kept (ceil(0.2 N) = 400); planted recovered " +
                     std::to_string(hits) + "/400; 5-candidate oracle " + (oracle ? "matches" : "MISMATCH"));
}

Verdict metrics() {
    std::vector<std::string> failures;
    const auto id = testing::corpus({"the cat sat on the mat", "dogs bark"});
    const std::vector<SystemReport> sys{{"S", evaluate(id, id)}};
    std::ostringstream table;
    render_table(sys, table);
    if (table.str().find("100.00") == std::string::npos) failures.push_back("identity BLEU");
    const auto clipped = bleu(testing::corpus({"the the the the the the the"}), testing::corpus({"the cat is on the mat"}));
    if (std::abs(clipped.precisions[0] - 2.0 / 7) > 1e-12) failures.push_back("clipped precision");

    std::mt19937_64 rng(43);
    auto words = [&](std::size_t max_len, std::size_t vocab) {
        testing::Words w(rng() % (max_len + 1));
        for (auto& x : w) x = std::string(1, static_cast<char>('a' + rng() % vocab));
        return w;
    };
    std::size_t dp_ok = 0;
    for (int i = 0; i < 500; ++i) {
        const auto h = words(10, 5), r = words(10, 5);
        dp_ok += ter(h, r, {.shifts = false}).edits == testing::levenshtein(h, r);
    }
    if (dp_ok != 500) failures.push_back("no-shift TER");

    const auto hyp = testing::corpus({"one two three four", "", "five six seven eight"});
    const auto ref = testing::corpus({"one two three four", "nine ten", "five six seven eight"});
    const auto rep = evaluate(hyp, ref, DocumentMap{"A", "B", "A"});
    if (!(rep.documents.size() == 2 && rep.documents[0].bleu == 1.0 && rep.documents[0].ter == 0.0 &&
          rep.documents[1].bleu == 0.0 && rep.documents[1].ter == 1.0))
        failures.push_back("document isolation");

    std::size_t agree = 0, cases = 0;
    for (std::size_t vocab : {3, 4, 6}) {
        for (int i = 0; i < 400; ++i, ++cases) {
            const auto h = words(6, vocab), r = words(6, vocab);
            agree += ter(h, r).edits == testing::brute_force_ter_edits(h, r, 6);
        }
    }
    std::string detail = "BLEU identity 100.00, unigram 2/7, no-shift TER = DP on 500/500, documents isolated; "
                         "greedy TER = exhaustive optimum on " +
                         std::to_string(agree) + "/" + std::to_string(cases) + " pairs of <= 6 tokens";
    if (!failures.empty()) {
        detail = "failed:";
        for (const auto& f : failures) detail += " " + f + ";";
        return {Status::Fail, detail};
    }
    if (agree != cases) return {Status::Partial, detail + " (greedy shift search is a heuristic; see README)"};
    return {Status::Pass, detail};
}

Verdict demo() {
    testing::TempDir a("accept-demo-a"), b("accept-demo-b");
    std::ostringstream out_a, out_b, err;
    const auto start = Clock::now();
    const int ca = cli::run({"demo", "--workdir", a.path().string()}, out_a, err);
    const double secs = seconds_since(start);
    const int cb = cli::run({"--workers", "4", "demo", "--workdir", b.path().string()}, out_b, err);
    if (ca != 0 || cb != 0) return {Status::Fail, "demo exited with " + std::to_string(ca) + "/" + std::to_string(cb)};
    std::size_t files = 0, same = 0;
    for (const auto& e : fs::recursive_directory_iterator(a.path())) {
        if (!e.is_regular_file()) continue;
        ++files;
        same += testing::slurp(e.path()) == testing::slurp(b.path() / fs::relative(e.path(), a.path()));
    }
    return check(secs < 60.0 && files == same && out_a.str() == out_b.str(),
                 "completed in " + fmt(secs) + " s; " + std::to_string(same) + "/" + std::to_string(files) +
                     " artifacts byte-identical across two runs (1 and 4 workers)");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"published-number reproducibility", reproducibility_statement},
        {"NW aligner optimality", nw_optimality},
        {"mining determinism and speedup", mining_determinism},
        {"tuning recovery", tuning_recovery},
        {"LM correctness", lm_correctness},
        {"IBM Model 1", model1},
        {"selection", selection},
        {"metrics", metrics},
        {"end-to-end demo", demo},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {Status::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = v.status == Status::Pass      ? "PASS"
                          : v.status == Status::Fail    ? "FAIL"
                          : v.status == Status::Partial ? "PARTIAL"
                                                        : "N/A";
        failed += v.status == Status::Fail;
        std::cout << tag << "  " << name << ": " << v.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
