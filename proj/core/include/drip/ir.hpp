#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drip/errors.hpp"
#include "drip/origin.hpp"

namespace drip {

// ---------------------------------------------------------------------------
// Resource specifications
// ---------------------------------------------------------------------------

struct ReleasePair {
    std::string acquire;
    std::string release;

    auto operator<=>(const ReleasePair&) const = default;
    bool operator==(const ReleasePair&) const = default;
};

/// A resource list: acquire/release pairs plus the lifecycle callbacks where the
/// resource should be released (earliest first).
class ResourceSpec {
  public:
    /// Throws ValidationError on empty/duplicate pairs or empty release callbacks.
    ResourceSpec(std::string name, std::vector<ReleasePair> pairs, bool reentrant,
                 std::vector<std::string> release_callbacks,
                 std::optional<std::string> held_check = std::nullopt);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<ReleasePair>& pairs() const noexcept { return pairs_; }
    [[nodiscard]] bool reentrant() const noexcept { return reentrant_; }
    [[nodiscard]] const std::vector<std::string>& release_callbacks() const noexcept {
        return release_callbacks_;
    }
    [[nodiscard]] const std::optional<std::string>& held_check() const noexcept {
        return held_check_;
    }

    [[nodiscard]] bool is_acquire(std::string_view op) const;
    [[nodiscard]] bool is_release(std::string_view op) const;
    [[nodiscard]] bool matches(std::string_view acquire, std::string_view release) const;
    /// Release paired with `acquire` in the first pair that mentions it.
    [[nodiscard]] std::optional<std::string> mate_of(std::string_view acquire) const;
    /// Sorted, deduplicated acquire and release operation names.
    [[nodiscard]] std::vector<std::string> acquire_ops() const;
    [[nodiscard]] std::vector<std::string> release_ops() const;

    bool operator==(const ResourceSpec&) const = default;

  private:
    std::string name_;
    std::vector<ReleasePair> pairs_;
    bool reentrant_ = false;
    std::vector<std::string> release_callbacks_;
    std::optional<std::string> held_check_;
};

// ---------------------------------------------------------------------------
// Application IR
// ---------------------------------------------------------------------------

enum class StmtKind { Acquire, Release, Use, Call, Return, Other, ReleaseIfHeld };

[[nodiscard]] std::string_view to_string(StmtKind kind);
[[nodiscard]] std::optional<StmtKind> stmt_kind_from_string(std::string_view op);

struct Statement {
    StmtKind kind = StmtKind::Other;
    std::string api;    // acquire/release/release_if_held op, optional label for Other
    std::string target; // symbolic resource reference
    std::string callee; // Call only

    static Statement acquire(std::string api, std::string target) {
        return {StmtKind::Acquire, std::move(api), std::move(target), {}};
    }
    static Statement release(std::string api, std::string target) {
        return {StmtKind::Release, std::move(api), std::move(target), {}};
    }
    static Statement release_if_held(std::string api, std::string target) {
        return {StmtKind::ReleaseIfHeld, std::move(api), std::move(target), {}};
    }
    static Statement use(std::string target) { return {StmtKind::Use, {}, std::move(target), {}}; }
    static Statement call(std::string callee) { return {StmtKind::Call, {}, {}, std::move(callee)}; }
    static Statement ret() { return {StmtKind::Return, {}, {}, {}}; }
    static Statement other(std::string label = {}) { return {StmtKind::Other, std::move(label), {}, {}}; }

    bool operator==(const Statement&) const = default;
};

struct BasicBlock {
    std::string id;
    std::vector<Statement> statements;
    std::vector<std::string> successors;

    bool operator==(const BasicBlock&) const = default;
};

struct Procedure {
    std::string name;
    std::string entry;
    std::vector<BasicBlock> blocks; // document order
    std::vector<std::string> locals;

    [[nodiscard]] const BasicBlock* find_block(std::string_view id) const;
    [[nodiscard]] BasicBlock* find_block(std::string_view id);
    [[nodiscard]] const BasicBlock& block(std::string_view id) const;
    [[nodiscard]] bool is_local(std::string_view ref) const;

    bool operator==(const Procedure&) const = default;
};

struct CallbackEdge {
    std::string from;
    std::string to;
    std::vector<std::string> callbacks; // invoked in order when the edge is taken

    bool operator==(const CallbackEdge&) const = default;
};

struct CallbackGraph {
    std::string name;
    std::vector<std::string> states;
    std::string initial;
    std::vector<CallbackEdge> edges;

    bool operator==(const CallbackGraph&) const = default;
};

/// Starting -(onCreate,onStart,onResume)-> Running -(onPause,onResume)-> Running
/// -(onPause,onStop,onDestroy)-> Closed.
[[nodiscard]] const CallbackGraph& activity_lifecycle();

struct Component {
    std::string name;
    std::string lifecycle = "activity";
    std::map<std::string, std::string> callbacks; // callback name -> procedure

    bool operator==(const Component&) const = default;
};

/// Validated, immutable application model. Build it with `AppModel::create`.
class AppModel {
  public:
    /// Validates every invariant and derives the call graph.
    /// Throws ValidationError naming the offending entity.
    static AppModel create(std::string name, std::vector<Component> components,
                           std::vector<Procedure> procedures,
                           std::vector<CallbackGraph> lifecycles = {});

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<Component>& components() const noexcept { return components_; }
    [[nodiscard]] const std::map<std::string, Procedure>& procedures() const noexcept {
        return procedures_;
    }
    [[nodiscard]] const std::map<std::string, CallbackGraph>& lifecycles() const noexcept {
        return lifecycles_;
    }
    [[nodiscard]] const std::map<std::string, std::set<std::string>>& call_graph() const noexcept {
        return call_graph_;
    }
    [[nodiscard]] const std::set<std::string>& external_callees() const noexcept {
        return external_callees_;
    }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    [[nodiscard]] const Procedure* find_procedure(std::string_view name) const;
    [[nodiscard]] const Procedure& procedure(std::string_view name) const;
    [[nodiscard]] bool is_internal(std::string_view callee) const;
    /// Custom lifecycle by name, or the built-in activity graph.
    [[nodiscard]] const CallbackGraph& lifecycle_of(const Component& component) const;
    [[nodiscard]] const Component* find_component(std::string_view name) const;
    [[nodiscard]] const Statement& statement_at(const Origin& origin) const;

    /// Copy with `procedure` added or replaced (revalidated).
    [[nodiscard]] AppModel with_procedure(Procedure procedure) const;
    /// Copy with the component replaced (matched by name, revalidated).
    [[nodiscard]] AppModel with_component(Component component) const;

    bool operator==(const AppModel& other) const;

  private:
    AppModel() = default;

    std::string name_;
    std::vector<Component> components_;
    std::map<std::string, Procedure> procedures_;
    std::map<std::string, CallbackGraph> lifecycles_;
    std::map<std::string, std::set<std::string>> call_graph_;
    std::set<std::string> external_callees_;
    std::vector<std::string> warnings_;
};

// JSON encoding (see docs/formats.md).
[[nodiscard]] AppModel parse_app(std::string_view text);
[[nodiscard]] std::string serialize_app(const AppModel& app);
[[nodiscard]] ResourceSpec parse_resource_spec(std::string_view text);
[[nodiscard]] std::string serialize_resource_spec(const ResourceSpec& spec);

[[nodiscard]] std::string read_file(const std::string& path);
[[nodiscard]] AppModel load_app(const std::string& path);
[[nodiscard]] ResourceSpec load_resource_spec(const std::string& path);

} // namespace drip
