#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "drip/ir.hpp"

namespace drip {

// Brute-force reference: runs callback sequences statement by statement and tracks the
// resource directly. Shares no code with the automata-based analysis.

struct OracleOptions {
    int depth = 3;
    /// Times a block may run per procedure activation.
    int loop_bound = 4;
    /// Leaks are checked at the last release callback instead of the first.
    bool late = false;
    /// BudgetExceeded once this many block-level paths have been explored.
    std::uint64_t path_cap = 2'000'000;
};

struct OracleLeak {
    std::string component;
    Origin origin;

    auto operator<=>(const OracleLeak&) const = default;
    bool operator==(const OracleLeak&) const = default;
};

struct OracleViolation {
    std::string component;
    std::string kind; // NewLeak, UseAfterRelease or DoubleRelease

    auto operator<=>(const OracleViolation&) const = default;
    bool operator==(const OracleViolation&) const = default;
};

[[nodiscard]] std::set<OracleLeak> oracle_leaks(const AppModel& app, const ResourceSpec& spec,
                                                const OracleOptions& options = {});
[[nodiscard]] std::set<OracleViolation> oracle_violations(const AppModel& app,
                                                          const ResourceSpec& spec,
                                                          const OracleOptions& options = {});

// Random apps for differential testing.

struct GeneratorOptions {
    int max_procedures = 6;
    int max_blocks = 8;
    int max_statements = 3;
    double acquire_weight = 0.25;
    double release_weight = 0.2;
    double use_weight = 0.15;
    double call_weight = 0.15;
    double back_edge_probability = 0.2;
    /// Chance that a call may target any procedure, possibly closing a call cycle.
    double cycle_probability = 0.1;
};

/// Same seed and options give the same app.
[[nodiscard]] AppModel generate_app(std::uint64_t seed, const ResourceSpec& spec,
                                    const GeneratorOptions& options = {});

/// A large single-component app: straight-line-heavy helpers with labelled calls, about
/// `statements` labelled statements in total, and a handful of acquires and releases.
[[nodiscard]] AppModel generate_scaled_app(std::uint64_t seed, const ResourceSpec& spec,
                                           int statements);

} // namespace drip
