#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rscert {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    int grid_log2 = 20;
    int max_scale = 6;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    unsigned threads = 0; ///< 0 = one per hardware thread

    std::size_t grid_size() const { return std::size_t{1} << grid_log2; }
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` as JSON, or as short text with --format text; files are written
/// under the configured output directory. Returns 0 iff every requested
/// check passed, 1 on a failed check, 2 on invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rscert
