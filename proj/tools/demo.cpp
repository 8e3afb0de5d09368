#include "demo.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "cli.hpp"
#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"

namespace corpusforge::cli {

namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Stages {
  public:
    explicit Stages(const DemoOptions& options) : options_(options) {}

    /// Runs one subcommand with the shared global flags; returns its stdout.
    std::string run(const std::string& stage, std::vector<std::string> args) {
        args.insert(args.begin(), {"--seed", std::to_string(options_.seed), "--workers",
                                   std::to_string(options_.workers)});
        if (options_.force) args.insert(args.begin(), "--force");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        if (code != kExitOk) {
            // The stage's own diagnostics follow its resolved-config header.
            std::string detail = err.str();
            const auto pos = detail.find("error:");
            if (pos != std::string::npos) detail = detail.substr(pos);
            throw DataError("demo stage '" + stage + "' failed (exit " + std::to_string(code) + "): " + detail);
        }
        return out.str();
    }

  private:
    const DemoOptions& options_;
};

}  // namespace

void run_demo(const DemoOptions& options, std::ostream& out) {
    const fs::path data = options.data;
    const fs::path work = options.workdir;
    if (!fs::is_directory(data)) throw DataError("toy data directory " + data.string() + " not found");
    const fs::path summary_path = work / "summary.txt";
    if (fs::exists(summary_path) && !options.force)
        throw DataError(summary_path.string() + " already exists (pass --force to overwrite)");
    fs::create_directories(work);

    auto d = [&](const char* rel) { return (data / rel).string(); };
    auto w = [&](const char* rel) { return (work / rel).string(); };
    Stages stages(options);

    // Ingest and clean the in-domain parallel data.
    stages.run("ingest-ted", {"ingest-ted", "--input", d("ted/train.src.xml"), "--output", w("ted.src.txt"), "--docs",
                              w("ted.docs.tsv")});
    stages.run("ingest-ted", {"ingest-ted", "--input", d("ted/train.tgt.xml"), "--output", w("ted.tgt.txt")});
    const auto cleaning = key_values(stages.run(
        "clean", {"clean", "--source", w("ted.src.txt"), "--target", w("ted.tgt.txt"), "--output", w("ted.clean.tsv"),
                  "--output-source", w("ted.clean.src.txt"), "--output-target", w("ted.clean.tgt.txt"), "--report",
                  w("clean_report.txt")}));
    const std::string parallel_stats = stages.run("stats", {"stats", "--parallel", w("ted.clean.tsv")});
    const std::string general_stats = stages.run("stats", {"stats", d("general/general.txt")});

    // Lexicons and word alignment.
    stages.run("train-lex", {"train-lex", "--input", w("ted.clean.tsv"), "--output", w("lex.fwd.tsv"),
                             "--reverse-output", w("lex.bwd.tsv")});
    stages.run("align", {"align", "--input", w("ted.clean.tsv"), "--lexicon", w("lex.fwd.tsv"), "--reverse-lexicon",
                         w("lex.bwd.tsv"), "--output", w("ted.align.txt")});

    // Tune the miner on the gold subset, then mine the comparable collection.
    const auto tuned = key_values(stages.run(
        "tune-mine", {"tune-mine", "--manifest", d("wiki/manifest.tsv"), "--gold", d("wiki/gold.tsv"), "--lexicon",
                      w("lex.fwd.tsv"), "--output", w("tuning.tsv")}));
    const auto mined = key_values(stages.run(
        "mine", {"mine", "--manifest", d("wiki/manifest.tsv"), "--lexicon", w("lex.fwd.tsv"), "--threshold",
                 tuned.at("best_threshold"), "--gap-penalty", tuned.at("best_gap_penalty"), "--output",
                 w("mined.tsv"), "--report", w("mining_report.txt")}));

    // Domain-adaptive selection and the two language models.
    std::ostringstream rate;
    rate << options.rate;
    const auto selected = key_values(stages.run(
        "select", {"select", "--in-domain", w("ted.clean.tgt.txt"), "--general", d("general/general.txt"), "--rate",
                   rate.str(), "--output", w("selected.txt"), "--scores", w("selection_scores.tsv")}));
    stages.run("train-lm", {"train-lm", "--input", w("ted.clean.tgt.txt"), "--output", w("lm.base.arpa")});
    stages.run("train-lm", {"train-lm", "--input", w("ted.clean.tgt.txt"), "--input", w("selected.txt"), "--output",
                            w("lm.ext.arpa")});
    const auto ppl_base = key_values(stages.run("ppl", {"ppl", "--lm", w("lm.base.arpa"), "--input", d("test/ref.txt")}));
    const auto ppl_ext = key_values(stages.run("ppl", {"ppl", "--lm", w("lm.ext.arpa"), "--input", d("test/ref.txt")}));

    // Evaluation of the bundled system outputs.
    stages.run("score", {"score", "--hyp", d("test/baseline.txt"), "--name", "BASELINE", "--hyp", d("test/extended.txt"),
                         "--name", "EXTENDED", "--ref", d("test/ref.txt"), "--docs", d("test/docs.tsv"), "--output",
                         w("scores.txt"), "--tsv", w("scores.tsv")});

    std::ostringstream s;
    s << "corpusforge demo pipeline (seed " << options.seed << ")\n\n";
    s << "1. In-domain parallel data after cleaning\n";
    s << "   input_pairs=" << cleaning.at("input_pairs") << " kept=" << cleaning.at("kept_pairs")
      << " duplicates=" << cleaning.at("dropped_duplicates") << " length_ratio=" << cleaning.at("dropped_length_ratio")
      << " empty_or_control=" << cleaning.at("dropped_empty_or_control") << '\n';
    auto indent = [](const std::string& text) {
        std::string r;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) r += "   " + line + '\n';
        return r;
    };
    // Paths are shown relative to the workdir or data directory so the summary
    // does not depend on where those live.
    auto relative = [&](std::string text) {
        for (const std::string& prefix : {(work / "").string(), (data / "").string()}) {
            for (std::size_t pos; (pos = text.find(prefix)) != std::string::npos;) text.erase(pos, prefix.size());
        }
        return text;
    };
    s << indent(relative(parallel_stats)) << "\n2. General-domain monolingual data\n"
      << indent(relative(general_stats));
    s << "\n3. Comparable-corpus mining\n";
    s << "   tuned threshold=" << tuned.at("best_threshold") << " gap_penalty=" << tuned.at("best_gap_penalty")
      << " precision=" << tuned.at("precision") << " recall=" << tuned.at("recall") << " f1=" << tuned.at("f1") << '\n';
    s << "   document_pairs=" << mined.at("document_pairs") << " matches=" << mined.at("matches")
      << " emitted=" << mined.at("emitted") << '\n';
    s << "\n4. Data selection\n";
    s << "   rate=" << rate.str() << " candidates=" << selected.at("candidates") << " selected=" << selected.at("selected")
      << '\n';
    s << "\n5. Language models on the test references\n";
    s << "   baseline (in-domain)         perplexity=" << ppl_base.at("perplexity") << " oov=" << ppl_base.at("oov")
      << '\n';
    s << "   extended (in-domain+selected) perplexity=" << ppl_ext.at("perplexity") << " oov=" << ppl_ext.at("oov")
      << '\n';
    s << "\n6. Evaluation of the bundled system outputs (BLEU and TER x100)\n";
    s << indent(slurp(work / "scores.txt"));

    write_atomic(summary_path, options.force, [&](std::ostream& o) { o << s.str(); });
    out << s.str();
}

}  // namespace corpusforge::cli
