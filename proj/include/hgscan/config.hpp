#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hgscan/boundary.hpp"
#include "hgscan/harness.hpp"

namespace hgscan {

/// Everything a `key = value` run file can describe.
///
/// Lines are `key = value`; `#` starts a comment; blank lines are ignored.
/// File paths are resolved relative to the directory of the run file.
/// Unknown keys and malformed values raise a line-numbered InputError.
struct RunConfig {
    ExperimentConfig experiment;
    ScenarioParams scenario;
    std::vector<double> rho_grid;
    double delta_m = kDefaultOddDelta;
    std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Comma-separated reals, e.g. "1,1.5,2".
std::vector<double> parse_real_list(const std::string& text);

}  // namespace hgscan
