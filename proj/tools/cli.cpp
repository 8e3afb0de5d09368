#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/eval_mt.hpp"
#include "corpusforge/mine.hpp"
#include "corpusforge/ngram_lm.hpp"
#include "corpusforge/select.hpp"
#include "corpusforge/ted_xml.hpp"
#include "corpusforge/text.hpp"
#include "corpusforge/word_align.hpp"
#include "demo.hpp"

namespace corpusforge::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, bool force, const std::function<void(std::ostream&)>& body) {
    if (fs::exists(path) && !force)
        throw DataError(path.string() + " already exists (pass --force to overwrite)");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        try {
            body(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("write failed for " + path.string());
        }
    }
    fs::rename(tmp, path);
}

fs::path bundled_toy_data() { return fs::path(CORPUSFORGE_SOURCE_DIR) / "data" / "toy"; }

namespace {

// Options shared by every subcommand.
struct Globals {
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool force = false;
    std::string config;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

TranslationLexicon load_lexicon(const fs::path& path) {
    auto in = open_input(path);
    return read_lexicon(in);
}

NGramModel load_arpa(const fs::path& path) {
    auto in = open_input(path);
    return read_arpa(in);
}

void write_lines(std::ostream& out, const Corpus& corpus) {
    for (const auto& s : corpus) out << join_tokens(s.tokens) << '\n';
}

void write_pairs_tsv(std::ostream& out, const ParallelCorpus& corpus) {
    for (const auto& p : corpus.pairs) out << join_tokens(p.source.tokens) << '\t' << join_tokens(p.target.tokens) << '\n';
}

ParallelCorpus load_parallel(const std::string& tsv, const std::string& source, const std::string& target) {
    if (!tsv.empty()) {
        if (!source.empty() || !target.empty()) throw ArgumentError("give either --input or --source/--target");
        return read_parallel_tsv(fs::path(tsv));
    }
    if (source.empty() || target.empty()) throw ArgumentError("need --input or both --source and --target");
    return read_parallel(source, target);
}

std::string format_stats_row(const std::string& name, const CorpusStats& s) {
    return name + '\t' + std::to_string(s.sentences) + '\t' + std::to_string(s.tokens) + '\t' +
           std::to_string(s.unique_tokens);
}

/// Reads `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t lineno = 0;
    for (const auto& raw : read_lines(path)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(" \t") - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key = value", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": empty key", lineno);
        if (key.starts_with("--")) key.erase(0, 2);
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

/// Appends file settings for every option not already on the command line,
/// so explicit flags always win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        else if (args[i].starts_with("--config=")) config = args[i].substr(9);
    }
    if (config.empty()) return args;
    if (!fs::exists(config)) throw DataError("config file " + config + " does not exist");

    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
    };
    std::vector<std::string> extra;
    std::map<std::string, bool> seen;
    for (auto& [key, value] : read_config_file(config)) {
        if (given(key)) continue;
        const bool repeated = seen.contains(key);
        seen[key] = true;
        if (value == "true" || value == "false") {
            if (value == "true" && !repeated) extra.push_back("--" + key);
            continue;
        }
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

void log_resolved(const CLI::App& app, const CLI::App& sub, std::ostream& err) {
    err << "# corpusforge " << sub.get_name() << ": resolved configuration\n";
    auto dump = [&](const CLI::App& a) {
        for (const CLI::Option* opt : a.get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "help-all" || name == "config") continue;
            std::string value;
            if (opt->count() > 0) {
                const auto& results = opt->results();
                for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
                if (opt->get_expected_max() == 0) value = "true";
            } else {
                value = opt->get_default_str();
                if (opt->get_expected_max() == 0) value = "false";
            }
            err << "#   " << name << " = " << value << '\n';
        }
    };
    dump(app);
    dump(sub);
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Corpus preparation toolkit: cleaning, lexicons, mining, language models, selection and scoring",
                 "corpusforge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Globals g;
    app.add_option("--seed", g.seed, "Seed for every sampled operation")->capture_default_str();
    app.add_option("--workers", g.workers, "Worker threads (0 = one per core)")->capture_default_str();
    app.add_flag("--force", g.force, "Overwrite existing outputs");
    app.add_option("--config", g.config, "File of `key = value` lines; command-line flags take precedence");

    // ingest-ted
    struct {
        std::string input, output, docs;
        bool keep_case = false;
    } ingest;
    auto* c_ingest = app.add_subcommand("ingest-ted", "Extract tokenized segments from TED-style XML");
    c_ingest->add_option("--input", ingest.input, "TED XML file")->required();
    c_ingest->add_option("--output", ingest.output, "One tokenized segment per line")->required();
    c_ingest->add_option("--docs", ingest.docs, "Write segment_index<TAB>talk_id here");
    c_ingest->add_flag("--keep-case", ingest.keep_case, "Do not lowercase");

    // clean
    struct {
        std::string input, source, target, output, out_source, out_target, report;
        double max_ratio = 4.0;
    } clean;
    auto* c_clean = app.add_subcommand("clean", "Drop duplicate, badly proportioned, empty and garbled pairs");
    c_clean->add_option("--input", clean.input, "Pairs as source<TAB>target");
    c_clean->add_option("--source", clean.source, "Source side, one sentence per line");
    c_clean->add_option("--target", clean.target, "Target side, line-aligned with --source");
    c_clean->add_option("--output", clean.output, "Kept pairs as TSV");
    c_clean->add_option("--output-source", clean.out_source, "Kept source side");
    c_clean->add_option("--output-target", clean.out_target, "Kept target side");
    c_clean->add_option("--report", clean.report, "Also write the report here");
    c_clean->add_option("--max-ratio", clean.max_ratio, "Longest allowed token-length ratio")->capture_default_str();

    // stats
    struct {
        std::vector<std::string> files;
        bool parallel = false;
    } stats;
    auto* c_stats = app.add_subcommand("stats", "Sentence, token and vocabulary counts");
    c_stats->add_option("files", stats.files, "Text files (one sentence per line)")->required();
    c_stats->add_flag("--parallel", stats.parallel, "Files are source<TAB>target pairs");

    // train-lex
    struct {
        std::string input, source, target, output, reverse_output;
        std::size_t iterations = 10;
    } lex;
    auto* c_lex = app.add_subcommand("train-lex", "Train an IBM Model 1 lexicon t(target | source)");
    c_lex->add_option("--input", lex.input, "Pairs as source<TAB>target");
    c_lex->add_option("--source", lex.source, "Source side");
    c_lex->add_option("--target", lex.target, "Target side");
    c_lex->add_option("--output", lex.output, "Lexicon TSV")->required();
    c_lex->add_option("--reverse-output", lex.reverse_output, "Also train t(source | target) into this file");
    c_lex->add_option("--iterations", lex.iterations, "EM iterations")->capture_default_str();

    // align
    struct {
        std::string input, source, target, lexicon, reverse_lexicon, output;
        std::string heuristic = "grow-diag";
    } align;
    auto* c_align = app.add_subcommand("align", "Symmetrized Viterbi word alignment");
    c_align->add_option("--input", align.input, "Pairs as source<TAB>target");
    c_align->add_option("--source", align.source, "Source side");
    c_align->add_option("--target", align.target, "Target side");
    c_align->add_option("--lexicon", align.lexicon, "t(target | source)")->required();
    c_align->add_option("--reverse-lexicon", align.reverse_lexicon, "t(source | target)")->required();
    c_align->add_option("--heuristic", align.heuristic, "intersection, union or grow-diag")->capture_default_str();
    c_align->add_option("--output", align.output, "One line of i-j links per pair")->required();

    // mine
    struct {
        std::string manifest, lexicon, output, report;
        MiningConfig config;
        bool timing = false;
    } mine;
    auto* c_mine = app.add_subcommand("mine", "Mine sentence pairs from comparable document pairs");
    c_mine->add_option("--manifest", mine.manifest, "source_doc<TAB>target_doc per line")->required();
    c_mine->add_option("--lexicon", mine.lexicon, "t(target | source) from train-lex")->required();
    c_mine->add_option("--output", mine.output, "similarity<TAB>source<TAB>target")->required();
    c_mine->add_option("--report", mine.report, "Mining report (key=value)");
    c_mine->add_option("--threshold", mine.config.threshold, "Minimum similarity to emit")->capture_default_str();
    c_mine->add_option("--gap-penalty", mine.config.gap_penalty, "Score of an unmatched sentence (<= 0)")
        ->capture_default_str();
    c_mine->add_option("--min-prob", mine.config.min_prob, "Lexicon probability counting as a translation")
        ->capture_default_str();
    c_mine->add_flag("--timing", mine.timing, "Include wall time in the report");

    // tune-mine
    struct {
        std::string manifest, gold, lexicon, output;
        double min_prob = 0.1;
        std::vector<double> thresholds = default_threshold_grid();
        std::vector<double> penalties = default_penalty_grid();
    } tunecmd;
    auto* c_tune = app.add_subcommand("tune-mine", "Grid-search threshold and gap penalty against gold links");
    c_tune->add_option("--manifest", tunecmd.manifest, "source_doc<TAB>target_doc per line")->required();
    c_tune->add_option("--gold", tunecmd.gold, "doc_id<TAB>i<TAB>j gold links")->required();
    c_tune->add_option("--lexicon", tunecmd.lexicon, "t(target | source)")->required();
    c_tune->add_option("--output", tunecmd.output, "Full grid as TSV");
    c_tune->add_option("--min-prob", tunecmd.min_prob, "Lexicon probability counting as a translation")
        ->capture_default_str();
    c_tune->add_option("--thresholds", tunecmd.thresholds, "Comma-separated grid")->delimiter(',')->capture_default_str();
    c_tune->add_option("--penalties", tunecmd.penalties, "Comma-separated grid")->delimiter(',')->capture_default_str();

    // train-lm
    struct {
        std::vector<std::string> inputs;
        std::string output;
        int order = 6;
        std::size_t min_count = 1;
    } lm;
    auto* c_lm = app.add_subcommand("train-lm", "Train an interpolated Kneser-Ney LM and write ARPA");
    c_lm->add_option("--input", lm.inputs, "Training text; repeat to concatenate files")->required();
    c_lm->add_option("--output", lm.output, "ARPA file")->required();
    c_lm->add_option("--order", lm.order, "N-gram order")->capture_default_str();
    c_lm->add_option("--min-count", lm.min_count, "Rarer words become <unk>")->capture_default_str();

    // ppl
    struct {
        std::string lm, input;
        bool per_sentence = false;
    } ppl;
    auto* c_ppl = app.add_subcommand("ppl", "Perplexity of a text under an ARPA model");
    c_ppl->add_option("--lm", ppl.lm, "ARPA file")->required();
    c_ppl->add_option("--input", ppl.input, "Text, one sentence per line")->required();
    c_ppl->add_flag("--per-sentence", ppl.per_sentence, "Also print one line per sentence");

    // select
    struct {
        std::string in_domain, in_domain_source, general, pairs, output, scores;
        std::string mode = "target-side";
        double rate = 0.20;
        int lm_order = 6;
        std::size_t edit_sample = 2000;
        std::vector<double> weights{1.0, 1.0, 1.0};
    } sel;
    auto* c_sel = app.add_subcommand("select", "Keep the general-domain data that looks most in-domain");
    c_sel->add_option("--in-domain", sel.in_domain, "In-domain text (target side for pairs)")->required();
    c_sel->add_option("--in-domain-source", sel.in_domain_source, "In-domain source side (pair modes using it)");
    c_sel->add_option("--general", sel.general, "General-domain monolingual text");
    c_sel->add_option("--parallel", sel.pairs, "General-domain pairs as source<TAB>target");
    c_sel->add_option("--mode", sel.mode, "Pair scoring: source-side, target-side or both-sides-averaged")
        ->capture_default_str();
    c_sel->add_option("--output", sel.output, "Selected sentences (or pairs), in input order")->required();
    c_sel->add_option("--scores", sel.scores, "Per-candidate score table");
    c_sel->add_option("--rate", sel.rate, "Fraction to keep")->capture_default_str();
    c_sel->add_option("--lm-order", sel.lm_order, "Order of both CED language models")->capture_default_str();
    c_sel->add_option("--edit-sample", sel.edit_sample, "In-domain sentences used by the edit criterion")
        ->capture_default_str();
    c_sel->add_option("--weights", sel.weights, "tf-idf,ced,edit rank weights")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();

    // score
    struct {
        std::vector<std::string> hyps, names;
        std::string ref, docs, output, tsv;
        bool smooth = false, no_shifts = false;
    } score;
    auto* c_score = app.add_subcommand("score", "BLEU, NIST and TER, per corpus and per document");
    c_score->add_option("--hyp", score.hyps, "Hypothesis file; repeat for several systems")->required();
    c_score->add_option("--name", score.names, "System name per --hyp (default: file stem)");
    c_score->add_option("--ref", score.ref, "Reference file")->required();
    c_score->add_option("--docs", score.docs, "segment_index<TAB>doc_id map");
    c_score->add_flag("--smooth", score.smooth, "Add-one smoothing of BLEU precisions for n >= 2");
    c_score->add_flag("--no-shifts", score.no_shifts, "TER without block shifts");
    c_score->add_option("--output", score.output, "Write the text table here instead of stdout");
    c_score->add_option("--tsv", score.tsv, "Also write the table as TSV");

    // demo
    DemoOptions demo;
    demo.data = bundled_toy_data().string();
    auto* c_demo = app.add_subcommand("demo", "Run every stage on the bundled toy data");
    c_demo->add_option("--workdir", demo.workdir, "Directory for all outputs")->required();
    c_demo->add_option("--data", demo.data, "Toy data directory")->capture_default_str();
    c_demo->add_option("--rate", demo.rate, "Selection rate")->capture_default_str();

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args);
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    log_resolved(app, *sub, err);
    const std::size_t workers = g.workers;
    const bool force = g.force;

    try {
        if (sub == c_ingest) {
            auto in = open_input(ingest.input);
            const TedIngestResult r = ingest_ted_xml(in, TokenizeProfile{.lowercase = !ingest.keep_case});
            for (const auto& d : r.diagnostics) err << "warning: " << d << '\n';
            std::size_t segments = 0;
            write_atomic(ingest.output, force, [&](std::ostream& o) {
                for (const auto& doc : r.documents) {
                    write_lines(o, doc.sentences);
                    segments += doc.sentences.size();
                }
            });
            if (!ingest.docs.empty()) {
                write_atomic(ingest.docs, force, [&](std::ostream& o) {
                    std::size_t index = 0;
                    for (const auto& doc : r.documents)
                        for (std::size_t k = 0; k < doc.sentences.size(); ++k) o << index++ << '\t' << doc.id << '\n';
                });
            }
            out << "talks=" << r.documents.size() << "\nsegments=" << segments
                << "\nrejected_talks=" << r.diagnostics.size() << '\n';
        } else if (sub == c_clean) {
            if (clean.output.empty() && (clean.out_source.empty() || clean.out_target.empty()))
                throw ArgumentError("need --output or both --output-source and --output-target");
            if (!(clean.max_ratio >= 1.0)) throw ArgumentError("--max-ratio must be at least 1");
            const auto corpus = load_parallel(clean.input, clean.source, clean.target);
            const CleaningResult r = clean_parallel(corpus, CleaningConfig{.max_ratio = clean.max_ratio});
            if (!clean.output.empty()) write_atomic(clean.output, force, [&](std::ostream& o) { write_pairs_tsv(o, r.corpus); });
            if (!clean.out_source.empty())
                write_atomic(clean.out_source, force, [&](std::ostream& o) { write_lines(o, r.corpus.source_side()); });
            if (!clean.out_target.empty())
                write_atomic(clean.out_target, force, [&](std::ostream& o) { write_lines(o, r.corpus.target_side()); });
            std::ostringstream rep;
            rep << "input_pairs=" << r.report.input_pairs << "\nkept_pairs=" << r.report.kept_pairs
                << "\ndropped_duplicates=" << r.report.dropped_duplicates
                << "\ndropped_length_ratio=" << r.report.dropped_length_ratio
                << "\ndropped_empty_or_control=" << r.report.dropped_empty_or_control << '\n';
            if (!clean.report.empty()) write_atomic(clean.report, force, [&](std::ostream& o) { o << rep.str(); });
            out << rep.str();
        } else if (sub == c_stats) {
            if (stats.parallel) {
                out << "file\tside\tsentences\ttokens\tunique_tokens\n";
                for (const auto& f : stats.files) {
                    const ParallelStats s = corpus_stats(read_parallel_tsv(fs::path(f)));
                    out << format_stats_row(f + "\tsource", s.source) << '\n'
                        << format_stats_row(f + "\ttarget", s.target) << '\n';
                }
            } else {
                out << "file\tsentences\ttokens\tunique_tokens\n";
                for (const auto& f : stats.files) out << format_stats_row(f, corpus_stats(read_corpus(f))) << '\n';
            }
        } else if (sub == c_lex) {
            const auto corpus = load_parallel(lex.input, lex.source, lex.target);
            const Model1Options opts{.iterations = lex.iterations, .workers = workers};
            const Model1Result fwd = train_model1(corpus, opts);
            write_atomic(lex.output, force, [&](std::ostream& o) { write_lexicon(fwd.lexicon, o); });
            out << "direction\titeration\tlog_likelihood\n";
            for (std::size_t i = 0; i < fwd.log_likelihoods.size(); ++i)
                out << "forward\t" << i << '\t' << format_fixed(fwd.log_likelihoods[i], 6) << '\n';
            if (!lex.reverse_output.empty()) {
                ParallelCorpus flipped;
                for (const auto& p : corpus.pairs) flipped.pairs.push_back({p.target, p.source});
                const Model1Result bwd = train_model1(flipped, opts);
                write_atomic(lex.reverse_output, force, [&](std::ostream& o) { write_lexicon(bwd.lexicon, o); });
                for (std::size_t i = 0; i < bwd.log_likelihoods.size(); ++i)
                    out << "backward\t" << i << '\t' << format_fixed(bwd.log_likelihoods[i], 6) << '\n';
            }
        } else if (sub == c_align) {
            const auto heuristic = parse_heuristic(align.heuristic);
            const auto corpus = load_parallel(align.input, align.source, align.target);
            const auto fwd = load_lexicon(align.lexicon);
            const auto bwd = load_lexicon(align.reverse_lexicon);
            write_atomic(align.output, force, [&](std::ostream& o) {
                for (const auto& p : corpus.pairs) {
                    const auto f = viterbi_align(fwd, p.source, p.target);
                    const auto b = transpose(viterbi_align(bwd, p.target, p.source));
                    o << format_links(symmetrize(f, b, heuristic, p.source.size(), p.target.size())) << '\n';
                }
            });
        } else if (sub == c_mine) {
            mine.config.workers = workers;
            mine.config.validate();
            const auto pairs = read_manifest(mine.manifest);
            const PairScorer scorer(load_lexicon(mine.lexicon), mine.config.min_prob);
            const MiningResult r = mine_collection(pairs, scorer, mine.config);
            write_atomic(mine.output, force, [&](std::ostream& o) { write_mined_tsv(r.pairs, o); });
            if (!mine.report.empty())
                write_atomic(mine.report, force, [&](std::ostream& o) { write_mining_report(r.report, o, mine.timing); });
            out << "document_pairs=" << r.report.document_pairs << "\nmatches=" << r.report.matches
                << "\nemitted=" << r.report.emitted << '\n';
        } else if (sub == c_tune) {
            const auto pairs = read_manifest(tunecmd.manifest);
            auto gin = open_input(tunecmd.gold);
            auto gold_links = read_gold(gin);
            std::vector<GoldDocument> gold;
            for (const auto& p : pairs) {
                GoldDocument d{p, {}};
                if (auto it = gold_links.find(p.source.id); it != gold_links.end()) {
                    d.links = it->second;
                    gold_links.erase(it);
                }
                gold.push_back(std::move(d));
            }
            if (!gold_links.empty())
                throw DataError("gold names document '" + gold_links.begin()->first + "' absent from the manifest");
            const PairScorer scorer(load_lexicon(tunecmd.lexicon), tunecmd.min_prob);
            const TuningResult r = tune(gold, scorer, tunecmd.thresholds, tunecmd.penalties, workers);
            if (!tunecmd.output.empty()) {
                write_atomic(tunecmd.output, force, [&](std::ostream& o) {
                    o << "threshold\tgap_penalty\tprecision\trecall\tf1\n";
                    for (const auto& p : r.grid)
                        o << format_exact(p.threshold) << '\t' << format_exact(p.gap_penalty) << '\t'
                          << format_fixed(p.precision, 6) << '\t' << format_fixed(p.recall, 6) << '\t'
                          << format_fixed(p.f1, 6) << '\n';
                });
            }
            out << "best_threshold=" << format_exact(r.best_threshold)
                << "\nbest_gap_penalty=" << format_exact(r.best_gap_penalty)
                << "\nprecision=" << format_fixed(r.precision, 6) << "\nrecall=" << format_fixed(r.recall, 6)
                << "\nf1=" << format_fixed(r.f1, 6) << '\n';
        } else if (sub == c_lm) {
            Corpus corpus;
            for (const auto& f : lm.inputs) {
                Corpus part = read_corpus(f);
                corpus.insert(corpus.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
            }
            const NGramModel model = train_lm(corpus, lm.order, lm.min_count);
            write_atomic(lm.output, force, [&](std::ostream& o) { write_arpa(model, o); });
            out << "order=" << model.order() << "\nsentences=" << corpus.size() << '\n';
            for (int n = 1; n <= model.order(); ++n) out << "ngrams_" << n << '=' << model.ngrams(n).size() << '\n';
        } else if (sub == c_ppl) {
            const NGramModel model = load_arpa(ppl.lm);
            const Corpus corpus = read_corpus(ppl.input);
            if (ppl.per_sentence) {
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    const auto r = perplexity(model, corpus[i]);
                    out << i << '\t' << format_fixed(r.log10_prob_sum, 6) << '\t' << format_fixed(r.perplexity, 6)
                        << '\n';
                }
            }
            const auto r = perplexity(model, corpus);
            out << "sentences=" << corpus.size() << "\ntokens=" << r.token_count << "\noov=" << r.oov_count
                << "\nlog10_prob=" << format_fixed(r.log10_prob_sum, 6)
                << "\nperplexity=" << format_fixed(r.perplexity, 6) << '\n';
        } else if (sub == c_sel) {
            SelectionConfig config;
            config.acceptance_rate = sel.rate;
            config.pair_mode = parse_pair_mode(sel.mode);
            std::copy(sel.weights.begin(), sel.weights.end(), config.weights.begin());
            config.validate();
            if (sel.general.empty() == sel.pairs.empty()) throw ArgumentError("give exactly one of --general or --parallel");
            const ProfileOptions popts{.lm_order = sel.lm_order, .edit_sample_size = sel.edit_sample, .seed = g.seed};
            const Corpus in_domain = read_corpus(sel.in_domain);
            SelectionResult table;
            std::size_t candidates = 0;
            if (!sel.general.empty()) {
                const Corpus general = read_corpus(sel.general);
                candidates = general.size();
                const DomainProfile profile = build_profile(in_domain, general, popts);
                const Corpus kept = select_for_lm(general, profile, config, workers, &table);
                write_atomic(sel.output, force, [&](std::ostream& o) { write_lines(o, kept); });
            } else {
                const ParallelCorpus pairs = read_parallel_tsv(fs::path(sel.pairs));
                if (pairs.empty()) throw DataError("nothing to select from: " + sel.pairs + " is empty");
                candidates = pairs.size();
                std::optional<DomainProfile> src_profile, tgt_profile;
                if (config.pair_mode != PairMode::TargetSide) {
                    if (sel.in_domain_source.empty()) throw ArgumentError("--mode " + sel.mode + " needs --in-domain-source");
                    src_profile = build_profile(read_corpus(sel.in_domain_source), pairs.source_side(), popts);
                }
                if (config.pair_mode != PairMode::SourceSide)
                    tgt_profile = build_profile(in_domain, pairs.target_side(), popts);
                const auto scores = score_pairs(pairs, config.pair_mode, src_profile ? &*src_profile : nullptr,
                                                tgt_profile ? &*tgt_profile : nullptr, workers);
                table = combine_and_resample(scores, config);
                ParallelCorpus kept;
                for (std::size_t i : table.selected) kept.pairs.push_back(pairs.pairs[i]);
                write_atomic(sel.output, force, [&](std::ostream& o) { write_pairs_tsv(o, kept); });
            }
            if (!sel.scores.empty()) write_atomic(sel.scores, force, [&](std::ostream& o) { write_score_table(table, o); });
            out << "candidates=" << candidates << "\nselected=" << table.selected.size() << '\n';
        } else if (sub == c_score) {
            if (!score.names.empty() && score.names.size() != score.hyps.size())
                throw ArgumentError("give one --name per --hyp");
            const Corpus refs = read_corpus(score.ref);
            std::optional<DocumentMap> docs;
            if (!score.docs.empty()) docs = read_document_map(fs::path(score.docs), refs.size());
            EvalOptions opts;
            opts.bleu.smooth = score.smooth;
            opts.ter.shifts = !score.no_shifts;
            opts.workers = workers;
            std::vector<SystemReport> systems;
            for (std::size_t k = 0; k < score.hyps.size(); ++k) {
                const Corpus hyps = read_corpus(score.hyps[k]);
                const std::string name = score.names.empty() ? fs::path(score.hyps[k]).stem().string() : score.names[k];
                try {
                    systems.push_back({name, evaluate(hyps, refs, docs, opts)});
                } catch (const DataError& e) {
                    throw DataError(score.hyps[k] + ": " + e.what());
                }
            }
            std::ostringstream table;
            render_table(systems, table);
            if (score.output.empty()) out << table.str();
            else write_atomic(score.output, force, [&](std::ostream& o) { o << table.str(); });
            if (!score.tsv.empty()) write_atomic(score.tsv, force, [&](std::ostream& o) { write_report_tsv(systems, o); });
        } else if (sub == c_demo) {
            if (!(demo.rate > 0.0 && demo.rate <= 1.0)) throw ArgumentError("--rate must lie in (0, 1]");
            demo.seed = g.seed;
            demo.workers = workers;
            demo.force = force;
            run_demo(demo, out);
        }
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace corpusforge::cli
