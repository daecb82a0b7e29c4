#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drip/automata.hpp"
#include "drip/ir.hpp"
#include "drip/rfg.hpp"

namespace drip {

// ---------------------------------------------------------------------------
// Property automata
// ---------------------------------------------------------------------------

enum class ViolationKind { NewLeak, UseAfterRelease, DoubleRelease };

[[nodiscard]] std::string_view to_string(ViolationKind kind);

struct PropertyMode {
    /// Accept at f while an acquire is pending.
    bool leaks = true;
    /// Accept releases and uses of a resource that is not held.
    bool misuse = false;
};

/// Verdict attached to an accepting state of a property automaton.
struct Acceptance {
    ViolationKind kind = ViolationKind::NewLeak;
    std::optional<Origin> origin; // leaked acquire (earliest unmatched)
};

struct PropertyAutomaton {
    PushdownAutomaton pda;
    std::map<State, Acceptance> accepting;
};

/// Property automaton over `sigma` (a flow-automaton alphabet). Acquire symbols push
/// (reentrant) or enter a pending state (non-reentrant); the control state remembers the
/// origin of the earliest unmatched acquire.
[[nodiscard]] PropertyAutomaton property_automaton(const Alphabet& sigma, const ResourceSpec& spec,
                                                   PropertyMode mode);

struct Finding {
    ViolationKind kind = ViolationKind::NewLeak;
    std::optional<Origin> origin;
    Witness witness;
};

/// Shortest witness per (kind, origin) of the property over all s-to-f paths of `g`.
[[nodiscard]] std::vector<Finding> check_graph(const ResourceFlowGraph& g, const ResourceSpec& spec,
                                               PropertyMode mode);

/// Shortest leaking witness per earliest unmatched acquire origin.
[[nodiscard]] std::vector<Witness> leaking_paths(const ResourceFlowGraph& g, const ResourceSpec& spec);

/// Witness symbols without origin tags ("new@p/b/0" -> "new").
[[nodiscard]] std::vector<std::string> plain_symbols(const Witness& w);

// ---------------------------------------------------------------------------
// Inter-procedural summaries
// ---------------------------------------------------------------------------

struct CycleWarning {
    std::string caller;
    std::string callee;

    [[nodiscard]] std::string message() const;
    bool operator==(const CycleWarning&) const = default;
};

struct Summary {
    std::string procedure;
    std::vector<Witness> leaking_paths;
    /// Resource skeleton with callees substituted: s, f and resource nodes only.
    ResourceFlowGraph graph;
};

struct Summaries {
    std::map<std::string, Summary> procedures;
    std::vector<CycleWarning> warnings;
    std::vector<std::string> order; // callees before callers
};

/// Call edges removed to make the call graph acyclic, in removal order.
[[nodiscard]] std::vector<CycleWarning> break_cycles(const AppModel& app);

/// Summaries for every procedure, in reverse topological order of the call graph.
/// With `track_uses`, Use nodes are kept in the summary graphs.
[[nodiscard]] Summaries all_calls(const AppModel& app, const ResourceSpec& spec,
                                  bool track_uses = false, bool compute_leaks = true);

// ---------------------------------------------------------------------------
// Callback unrolling and app-level analysis
// ---------------------------------------------------------------------------

enum class ReleasePolicy { Early, Late };

[[nodiscard]] std::string_view to_string(ReleasePolicy policy);

struct AnalysisOptions {
    ReleasePolicy policy = ReleasePolicy::Early;
};

/// The callback where fixes go for this policy.
[[nodiscard]] const std::string& target_callback(const ResourceSpec& spec, ReleasePolicy policy);

/// Flattened callback sequences of the maximal lifecycle paths that visit each state at
/// most `depth` times.
[[nodiscard]] std::vector<std::vector<std::string>> lifecycle_paths(const CallbackGraph& graph,
                                                                    int depth);

/// Every prefix of a bounded lifecycle path that ends with a release callback, shortest first.
/// Throws NoReleaseCallback when the graph never invokes one.
[[nodiscard]] std::vector<std::vector<std::string>> unroll_callbacks(const CallbackGraph& graph,
                                                                     const ResourceSpec& spec,
                                                                     int depth);

struct LeakReport {
    std::string resource;
    std::string component;
    std::vector<std::string> callback_sequence;
    Witness witness;
    Origin acquire_origin;
    std::string release_callback;
};

struct AnalysisResult {
    std::vector<LeakReport> reports;
    std::vector<std::string> warnings;
};

/// Resource-flow graph of a callback sequence: implemented callbacks' summary graphs
/// chained exit-to-entry.
[[nodiscard]] ResourceFlowGraph sequence_graph(const Component& component,
                                               const std::vector<std::string>& sequence,
                                               const Summaries& summaries);

[[nodiscard]] AnalysisResult analyze_app(const AppModel& app, const ResourceSpec& spec, int depth,
                                         AnalysisOptions options = {});
[[nodiscard]] std::vector<LeakReport> analyze(const AppModel& app, const ResourceSpec& spec,
                                              int depth = 3, AnalysisOptions options = {});

// JSON / text renderings.
[[nodiscard]] std::string reports_to_json(const AnalysisResult& result, const ResourceSpec& spec,
                                          int depth, AnalysisOptions options);
[[nodiscard]] std::string reports_to_text(const AnalysisResult& result);

} // namespace drip
