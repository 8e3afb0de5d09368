#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace corpusforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `corpusforge` invocation. `args` excludes the program name.
/// Command output goes to `out`, diagnostics and the resolved configuration to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes through a sibling temporary file renamed over `path` on success.
/// An existing `path` without `force` throws DataError.
void write_atomic(const std::filesystem::path& path, bool force, const std::function<void(std::ostream&)>& body);

/// Toy data shipped with the source tree.
std::filesystem::path bundled_toy_data();

}  // namespace corpusforge::cli
