#include "drip/repair.hpp"

#include <algorithm>
#include <deque>

namespace drip {

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::Valid ? "Valid" : "Invalid";
}

bool RepairResult::any_invalid() const {
    return std::any_of(fixes.begin(), fixes.end(), [](const AppliedFix& f) {
        return f.validation && f.validation->verdict == Verdict::Invalid;
    });
}

namespace {

bool has_return(const BasicBlock& b) {
    return std::any_of(b.statements.begin(), b.statements.end(),
                       [](const Statement& s) { return s.kind == StmtKind::Return; });
}

std::size_t end_of_block(const BasicBlock& b) {
    for (std::size_t i = 0; i < b.statements.size(); ++i) {
        if (b.statements[i].kind == StmtKind::Return) return i;
    }
    return b.statements.size();
}

// Control-flow successors that execution can actually take.
std::vector<std::string> live_successors(const BasicBlock& b) {
    return has_return(b) ? std::vector<std::string>{} : b.successors;
}

std::vector<std::string> live_blocks(const Procedure& p) {
    std::vector<std::string> order{p.entry};
    std::set<std::string> seen{p.entry};
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& s : live_successors(p.block(order[i]))) {
            if (seen.insert(s).second) order.push_back(s);
        }
    }
    return order;
}

std::set<std::string> reachable_after(const Procedure& p, const std::string& from) {
    std::set<std::string> seen;
    std::deque<std::string> work;
    for (const auto& s : live_successors(p.block(from))) work.push_back(s);
    while (!work.empty()) {
        auto b = work.front();
        work.pop_front();
        if (!seen.insert(b).second) continue;
        for (const auto& s : live_successors(p.block(b))) work.push_back(s);
    }
    return seen;
}

std::map<std::string, std::set<std::string>> dominators(const Procedure& p,
                                                        const std::vector<std::string>& live) {
    std::map<std::string, std::vector<std::string>> preds;
    for (const auto& b : live) {
        for (const auto& s : live_successors(p.block(b))) preds[s].push_back(b);
    }
    const std::set<std::string> all(live.begin(), live.end());
    std::map<std::string, std::set<std::string>> dom;
    for (const auto& b : live) dom[b] = all;
    dom[p.entry] = {p.entry};
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& b : live) {
            if (b == p.entry) continue;
            std::set<std::string> next = all;
            for (const auto& q : preds[b]) {
                std::set<std::string> keep;
                std::set_intersection(next.begin(), next.end(), dom[q].begin(), dom[q].end(),
                                      std::inserter(keep, keep.end()));
                next = std::move(keep);
            }
            next.insert(b);
            if (next != dom[b]) {
                dom[b] = std::move(next);
                changed = true;
            }
        }
    }
    return dom;
}

bool touches(const BasicBlock& b, const ResourceSpec& spec, const std::string& ref,
             const AppModel& app) {
    return std::any_of(b.statements.begin(), b.statements.end(), [&](const Statement& s) {
        switch (s.kind) {
        case StmtKind::Acquire: return spec.is_acquire(s.api);
        case StmtKind::Use: return s.target == ref;
        case StmtKind::Call: return app.is_internal(s.callee);
        default: return false;
        }
    });
}

// Before the return of the single exit block; otherwise the end of the deepest block that
// dominates every exit and is not followed by another acquire or use; otherwise the start.
Origin insertion_point(const AppModel& app, const Procedure& p, const ResourceSpec& spec,
                       const std::string& ref) {
    const auto live = live_blocks(p);
    std::vector<std::string> exits;
    for (const auto& b : live) {
        if (live_successors(p.block(b)).empty()) exits.push_back(b);
    }
    if (exits.size() == 1) {
        return {p.name, exits.front(), end_of_block(p.block(exits.front()))};
    }
    const auto dom = dominators(p, live);
    std::vector<std::string> chain;
    for (const auto& b : live) {
        if (std::all_of(exits.begin(), exits.end(),
                        [&](const std::string& e) { return dom.at(e).contains(b); })) {
            chain.push_back(b);
        }
    }
    std::sort(chain.begin(), chain.end(), [&](const std::string& a, const std::string& b) {
        return dom.at(a).size() > dom.at(b).size();
    });
    for (const auto& b : chain) {
        const auto later = reachable_after(p, b);
        if (std::none_of(later.begin(), later.end(), [&](const std::string& x) {
                return touches(p.block(x), spec, ref, app);
            })) {
            return {p.name, b, end_of_block(p.block(b))};
        }
    }
    return {p.name, p.entry, 0};
}

std::string fresh_field(const AppModel& app, const std::string& resource) {
    std::set<std::string> used;
    for (const auto& [_, p] : app.procedures()) {
        used.insert(p.locals.begin(), p.locals.end());
        for (const auto& b : p.blocks) {
            for (const auto& s : b.statements) used.insert(s.target);
        }
    }
    for (int k = 0;; ++k) {
        auto name = "plumb_" + resource + "_" + std::to_string(k);
        if (!used.contains(name)) return name;
    }
}

std::string fresh_procedure(const AppModel& app, const std::string& base) {
    if (!app.find_procedure(base)) return base;
    for (int k = 1;; ++k) {
        auto name = base + "_" + std::to_string(k);
        if (!app.find_procedure(name)) return name;
    }
}

bool already_applied(const AppModel& app, const Fix& fix) {
    const auto* p = app.find_procedure(fix.location.procedure);
    if (!p) return false;
    const auto* b = p->find_block(fix.location.block);
    if (!b || fix.location.index > b->statements.size()) return false;
    const auto stmt = Statement::release_if_held(fix.release_op, fix.target_ref);
    const auto i = fix.location.index;
    return (i > 0 && b->statements[i - 1] == stmt) ||
           (i < b->statements.size() && b->statements[i] == stmt);
}

void shift(Origin& o, const Origin& inserted) {
    if (o.procedure == inserted.procedure && o.block == inserted.block &&
        o.index >= inserted.index) {
        ++o.index;
    }
}

bool passes_through(const Witness& w, const Origin& o) {
    return std::any_of(w.provenance.begin(), w.provenance.end(),
                       [&](const std::optional<Origin>& p) { return p && *p == o; });
}

} // namespace

Fix synthesize_fix(const LeakReport& report, const AppModel& app, const ResourceSpec& spec) {
    const auto* component = app.find_component(report.component);
    if (!component) throw Error("unknown component '" + report.component + "'");
    const auto& acquire = app.statement_at(report.acquire_origin);
    if (acquire.kind != StmtKind::Acquire || !spec.is_acquire(acquire.api)) {
        throw StaleFix("no " + spec.name() + " acquire at " + report.acquire_origin.to_string());
    }
    const auto release = spec.mate_of(acquire.api);
    if (!release) throw SpecError("no release paired with '" + acquire.api + "'");

    Fix fix;
    fix.resource = spec.name();
    fix.component = component->name;
    fix.release_op = *release;
    fix.target_ref = acquire.target;
    fix.guarded = spec.held_check();
    fix.acquire_origin = report.acquire_origin;

    std::string procedure;
    if (auto it = component->callbacks.find(report.release_callback);
        it != component->callbacks.end()) {
        procedure = it->second;
        fix.location = insertion_point(app, app.procedure(procedure), spec, acquire.target);
    } else {
        procedure = fresh_procedure(app, "synth_" + component->name + "_" + report.release_callback);
        fix.synthesized_callback = report.release_callback;
        fix.location = {procedure, "b0", 0};
    }

    const auto& acquiring = app.procedure(report.acquire_origin.procedure);
    if (acquiring.name != procedure && acquiring.is_local(acquire.target)) {
        fix.introduces_field = fresh_field(app, spec.name());
        fix.target_ref = *fix.introduces_field;
    }
    return fix;
}

AppModel apply_fix(const AppModel& app, const Fix& fix) {
    AppModel out = app;
    if (fix.introduces_field) {
        const auto* p = out.find_procedure(fix.acquire_origin.procedure);
        const auto* b = p ? p->find_block(fix.acquire_origin.block) : nullptr;
        if (!b || fix.acquire_origin.index >= b->statements.size() ||
            b->statements[fix.acquire_origin.index].kind != StmtKind::Acquire) {
            throw StaleFix("no acquire at " + fix.acquire_origin.to_string());
        }
        auto copy = *p;
        copy.find_block(fix.acquire_origin.block)->statements[fix.acquire_origin.index].target =
            *fix.introduces_field;
        out = out.with_procedure(std::move(copy));
    }

    if (fix.synthesized_callback && !out.find_procedure(fix.location.procedure)) {
        const auto* component = out.find_component(fix.component);
        if (!component) throw StaleFix("unknown component '" + fix.component + "'");
        if (component->callbacks.contains(*fix.synthesized_callback)) {
            throw StaleFix(fix.component + " already implements " + *fix.synthesized_callback);
        }
        auto bound = *component;
        out = out.with_procedure(
            Procedure{fix.location.procedure, "b0", {BasicBlock{"b0", {Statement::ret()}, {}}}, {}});
        bound.callbacks[*fix.synthesized_callback] = fix.location.procedure;
        out = out.with_component(std::move(bound));
    }

    const auto* p = out.find_procedure(fix.location.procedure);
    const auto* b = p ? p->find_block(fix.location.block) : nullptr;
    if (!b || fix.location.index > b->statements.size()) {
        throw StaleFix("no insertion point " + fix.location.to_string());
    }
    if (already_applied(out, fix)) {
        throw StaleFix("guarded " + fix.release_op + "(" + fix.target_ref + ") already at " +
                       fix.location.to_string());
    }
    auto copy = *p;
    auto& statements = copy.find_block(fix.location.block)->statements;
    statements.insert(statements.begin() + static_cast<std::ptrdiff_t>(fix.location.index),
                      Statement::release_if_held(fix.release_op, fix.target_ref));
    return out.with_procedure(std::move(copy));
}

RepairResult repair(const AppModel& app, const ResourceSpec& spec, int depth,
                    RepairOptions options) {
    RepairResult result{app, {}, std::nullopt, {}, {}};
    const AnalysisOptions analysis_options{options.policy};
    const auto rounds = spec.pairs().size() + 2;
    for (std::size_t round = 0; round < rounds; ++round) {
        auto analysis = analyze_app(result.patched, spec, depth, analysis_options);
        if (round == 0) result.warnings = analysis.warnings;
        if (analysis.reports.empty()) break;
        std::vector<Origin> inserted;
        bool progress = false;
        for (auto report : analysis.reports) {
            for (const auto& at : inserted) shift(report.acquire_origin, at);
            try {
                auto fix = synthesize_fix(report, result.patched, spec);
                if (already_applied(result.patched, fix)) continue;
                result.patched = apply_fix(result.patched, fix);
                for (auto& done : result.fixes) {
                    shift(done.fix.location, fix.location);
                    shift(done.fix.acquire_origin, fix.location);
                }
                inserted.push_back(fix.location);
                result.fixes.push_back({std::move(fix), std::nullopt});
                progress = true;
            } catch (const Error& e) {
                result.errors.push_back(report.component + " " + report.acquire_origin.to_string() +
                                        ": " + e.what());
            }
        }
        if (!progress) break;
    }

    if (options.validate) {
        result.validation = validate(result.patched, spec, depth, analysis_options);
        for (auto& applied : result.fixes) {
            ValidationResult own;
            for (const auto& v : result.validation->violations) {
                const bool caused = v.kind == ViolationKind::NewLeak
                                        ? v.origin == applied.fix.acquire_origin
                                        : passes_through(v.witness, applied.fix.location);
                if (caused) own.violations.push_back(v);
            }
            own.verdict = own.violations.empty() ? Verdict::Valid : Verdict::Invalid;
            applied.validation = std::move(own);
        }
    }
    return result;
}

} // namespace drip
