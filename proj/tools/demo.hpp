#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

namespace corpusforge::cli {

struct DemoOptions {
    std::string workdir;
    std::string data;
    double rate = 0.20;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool force = false;
};

/// Runs clean -> train-lex -> align -> tune-mine -> mine -> select -> train-lm
/// -> ppl -> score on the toy data through the CLI itself, writes every
/// artifact plus summary.txt under the workdir and prints the summary.
/// A failing stage throws DataError naming it.
void run_demo(const DemoOptions& options, std::ostream& out);

}  // namespace corpusforge::cli
