#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "support.hpp"

using corpusforge::testing::slurp;
using corpusforge::testing::TempDir;
namespace cli = corpusforge::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string toy(const std::string& rel) { return (cli::bundled_toy_data() / rel).string(); }

}  // namespace

TEST(Cli, UnknownSubcommandIsUsageError) {
    EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"stats", "--no-such-flag", "x"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, RealBinaryExitCodes) {
    TempDir dir("cli-bin");
    const auto empty = dir.write("empty.txt", "");
    const std::string bin = CORPUSFORGE_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("stats " + empty.string()), 0);
    EXPECT_EQ(status("bogus"), 1);
    EXPECT_EQ(status("stats " + (dir / "absent.txt").string()), 2);
}

TEST(Cli, StatsOnEmptyFile) {
    TempDir dir("cli-stats");
    const auto empty = dir.write("empty.txt", "");
    const auto r = run({"stats", empty.string()});
    EXPECT_EQ(r.code, cli::kExitOk);
    EXPECT_NE(r.out.find("\t0\t0\t0\n"), std::string::npos);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "file\tsentences\ttokens\tunique_tokens");
}

TEST(Cli, RefusesToOverwriteWithoutForce) {
    TempDir dir("cli-force");
    const auto in = dir.write("in.txt", "a b c\nb c\n");
    const auto out = dir / "model.arpa";
    const std::vector<std::string> base{"train-lm", "--input", in.string(), "--output", out.string(), "--order", "2"};
    ASSERT_EQ(run(base).code, cli::kExitOk);
    const std::string first = slurp(out);
    EXPECT_EQ(run(base).code, cli::kExitData);
    EXPECT_EQ(slurp(out), first);
    auto forced = base;
    forced.insert(forced.begin(), "--force");
    EXPECT_EQ(run(forced).code, cli::kExitOk);
    EXPECT_EQ(slurp(out), first);
    // No temporary files are left behind.
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
    EXPECT_EQ(files, 2u);
}

TEST(Cli, ConfigFileDefersToFlags) {
    TempDir dir("cli-config");
    const auto in = dir.write("in.txt", "a b c\nb c\n");
    const auto cfg = dir.write("run.cfg", "# defaults\norder = 3\nmin-count = 2\n");
    const auto r = run({"--config", cfg.string(), "train-lm", "--input", in.string(), "--output",
                        (dir / "m.arpa").string(), "--min-count", "1"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.err.find("#   order = 3\n"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("#   min-count = 1\n"), std::string::npos) << r.err;
    EXPECT_NE(slurp(dir / "m.arpa").find("ngram 3="), std::string::npos);

    EXPECT_EQ(run({"--config", (dir / "missing.cfg").string(), "stats"}).code, cli::kExitUsage);
}

TEST(Cli, ResolvedConfigurationIsLogged) {
    TempDir dir("cli-log");
    const auto in = dir.write("in.txt", "x\n");
    const auto r = run({"--seed", "9", "stats", in.string()});
    EXPECT_NE(r.err.find("# corpusforge stats: resolved configuration"), std::string::npos);
    EXPECT_NE(r.err.find("#   seed = 9"), std::string::npos);
    EXPECT_NE(r.err.find("#   force = false"), std::string::npos);
}

TEST(Cli, UnmappedSegmentIsDataError) {
    TempDir dir("cli-score");
    const auto hyp = dir.write("hyp.txt", "a b c d e\nf g h i\n");
    const auto ref = dir.write("ref.txt", "a b c d e\nf g h i\n");
    const auto docs = dir.write("docs.tsv", "0\tt1\n");
    EXPECT_EQ(run({"score", "--hyp", hyp.string(), "--ref", ref.string(), "--docs", docs.string()}).code,
              cli::kExitData);
    const auto ok = run({"score", "--hyp", hyp.string(), "--ref", ref.string()});
    ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("100.00"), std::string::npos);
}

TEST(Cli, ScoreOnToyTestSet) {
    const auto r = run({"score", "--hyp", toy("test/baseline.txt"), "--name", "BASELINE", "--hyp",
                        toy("test/extended.txt"), "--name", "EXTENDED", "--ref", toy("test/ref.txt"), "--docs",
                        toy("test/docs.tsv")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find(" |")), "TALK ID");
    for (const char* talk : {"2183", "2190", "2204", "ALL"}) EXPECT_NE(r.out.find(talk), std::string::npos);
}

TEST(Cli, SelectAtFullRateKeepsEverything) {
    TempDir dir("cli-select");
    const auto in = dir.write("in.txt", "talk about ideas\nideas worth sharing\n");
    const auto gen = dir.write("gen.txt", "stock prices fell\ntalk about ideas today\nweather is cold\n");
    const auto r = run({"select", "--in-domain", in.string(), "--general", gen.string(), "--output",
                        (dir / "out.txt").string(), "--rate", "1.0", "--lm-order", "2"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(slurp(dir / "out.txt"), slurp(gen));
    EXPECT_EQ(run({"select", "--in-domain", in.string(), "--general", gen.string(), "--output",
                   (dir / "x.txt").string(), "--rate", "1.5"})
                  .code,
              cli::kExitUsage);
}

TEST(Demo, ByteIdenticalAcrossRunsAndGuardsReruns) {
    TempDir a("demo-a"), b("demo-b");
    const auto first = run({"demo", "--workdir", a.path().string()});
    ASSERT_EQ(first.code, cli::kExitOk) << first.err;
    const auto second = run({"demo", "--workdir", b.path().string(), "--workers", "2"});
    ASSERT_EQ(second.code, cli::kExitOk) << second.err;
    EXPECT_EQ(first.out, second.out);
    for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
        if (!e.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(e.path(), a.path());
        EXPECT_EQ(slurp(e.path()), slurp(b.path() / rel)) << rel;
    }
    EXPECT_NE(slurp(a / "summary.txt").find("BASELINE"), std::string::npos);
    EXPECT_EQ(run({"demo", "--workdir", a.path().string()}).code, cli::kExitData);
}
