#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drip/analysis.hpp"
#include "drip/ir.hpp"

namespace drip {

/// A guarded release to insert into a release callback.
struct Fix {
    std::string resource;
    std::string component;
    std::string release_op;
    std::string target_ref;
    /// Insertion point: the new statement gets this index, later statements shift by one.
    Origin location;
    std::optional<std::string> guarded;
    /// Fresh reference bound at the acquire site when the leaked one is not visible.
    std::optional<std::string> introduces_field;
    Origin acquire_origin;
    /// Set when the component does not implement the release callback: applying the fix
    /// creates `location.procedure` and binds it to this callback.
    std::optional<std::string> synthesized_callback;

    bool operator==(const Fix&) const = default;
};

enum class Verdict { Valid, Invalid };

[[nodiscard]] std::string_view to_string(Verdict verdict);

struct Violation {
    ViolationKind kind = ViolationKind::NewLeak;
    std::string component;
    std::optional<Origin> origin; // leaked acquire, NewLeak only
    Witness witness;
};

struct ValidationResult {
    Verdict verdict = Verdict::Valid;
    std::vector<Violation> violations;
};

[[nodiscard]] Fix synthesize_fix(const LeakReport& report, const AppModel& app,
                                 const ResourceSpec& spec);

/// Throws StaleFix when the location no longer fits the app or the same guarded release
/// is already there.
[[nodiscard]] AppModel apply_fix(const AppModel& app, const Fix& fix);

/// Re-checks `app` with uses tracked: residual leaks at the policy's target callback and
/// use-after-release / double release on every bounded lifecycle path.
[[nodiscard]] ValidationResult validate(const AppModel& app, const ResourceSpec& spec,
                                        int depth = 3, AnalysisOptions options = {});

struct RepairOptions {
    ReleasePolicy policy = ReleasePolicy::Early;
    bool validate = true;
};

struct AppliedFix {
    Fix fix;
    std::optional<ValidationResult> validation;
};

struct RepairResult {
    AppModel patched;
    std::vector<AppliedFix> fixes;
    std::optional<ValidationResult> validation;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    [[nodiscard]] bool any_invalid() const;
};

[[nodiscard]] RepairResult repair(const AppModel& app, const ResourceSpec& spec, int depth = 3,
                                  RepairOptions options = {});

[[nodiscard]] std::string validation_to_json(const ValidationResult& result,
                                             const ResourceSpec& spec);
[[nodiscard]] std::string validation_to_text(const ValidationResult& result);
[[nodiscard]] std::string patch_bundle_json(const RepairResult& result, const ResourceSpec& spec);
/// Changed procedures and callback bindings as +/- line listings.
[[nodiscard]] std::string patch_diff(const AppModel& before, const AppModel& after);

} // namespace drip
