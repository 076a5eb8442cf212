#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace igeo::verify {

/// One named invariant with its measured residual. `comparison` is "<="
/// (residual must stay below tolerance) or ">=" (witness checks, where the
/// measured gap must exceed a floor).
struct Check {
    std::string suite;
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string comparison = "<=";
    bool pass = false;
    std::string note;
};

struct Options {
    std::uint64_t seed = 7;
    /// Overrides for the named tolerances in default_tolerances().
    std::map<std::string, double> tol_overrides;
};

/// Module tolerances, stated once and shared with the CLI.
const std::map<std::string, double>& default_tolerances();

const std::vector<std::string>& suite_names();  // per-module + "all"

std::vector<Check> run_suite(const std::string& suite, const Options& opts = {});

inline bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace igeo::verify
