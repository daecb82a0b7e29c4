#include "drip/ir.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace drip {

ResourceSpec::ResourceSpec(std::string name, std::vector<ReleasePair> pairs, bool reentrant,
                           std::vector<std::string> release_callbacks,
                           std::optional<std::string> held_check)
    : name_(std::move(name)),
      pairs_(std::move(pairs)),
      reentrant_(reentrant),
      release_callbacks_(std::move(release_callbacks)),
      held_check_(std::move(held_check)) {
    if (name_.empty()) {
        throw ValidationError("resource spec has an empty name", "resource");
    }
    if (pairs_.empty()) {
        throw ValidationError("resource spec '" + name_ + "' has no acquire/release pairs", name_);
    }
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto& p = pairs_[i];
        if (p.acquire.empty() || p.release.empty()) {
            throw ValidationError("resource spec '" + name_ + "' has an empty operation name", name_);
        }
        if (p.acquire == p.release) {
            throw ValidationError("operation '" + p.acquire + "' is both acquire and release",
                                  p.acquire);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (pairs_[j] == p) {
                throw ValidationError(
                    "duplicate pair (" + p.acquire + ", " + p.release + ") in '" + name_ + "'",
                    p.acquire + "/" + p.release);
            }
        }
    }
    for (const auto& a : acquire_ops()) {
        if (is_release(a)) {
            throw ValidationError("operation '" + a + "' is both acquire and release", a);
        }
    }
    if (release_callbacks_.empty()) {
        throw ValidationError("resource spec '" + name_ + "' has no release callbacks", name_);
    }
}

bool ResourceSpec::is_acquire(std::string_view op) const {
    return std::any_of(pairs_.begin(), pairs_.end(),
                       [&](const ReleasePair& p) { return p.acquire == op; });
}

bool ResourceSpec::is_release(std::string_view op) const {
    return std::any_of(pairs_.begin(), pairs_.end(),
                       [&](const ReleasePair& p) { return p.release == op; });
}

bool ResourceSpec::matches(std::string_view acquire, std::string_view release) const {
    return std::any_of(pairs_.begin(), pairs_.end(), [&](const ReleasePair& p) {
        return p.acquire == acquire && p.release == release;
    });
}

std::optional<std::string> ResourceSpec::mate_of(std::string_view acquire) const {
    for (const auto& p : pairs_) {
        if (p.acquire == acquire) return p.release;
    }
    return std::nullopt;
}

std::vector<std::string> ResourceSpec::acquire_ops() const {
    std::set<std::string> ops;
    for (const auto& p : pairs_) ops.insert(p.acquire);
    return {ops.begin(), ops.end()};
}

std::vector<std::string> ResourceSpec::release_ops() const {
    std::set<std::string> ops;
    for (const auto& p : pairs_) ops.insert(p.release);
    return {ops.begin(), ops.end()};
}

std::string_view to_string(StmtKind kind) {
    switch (kind) {
    case StmtKind::Acquire: return "acquire";
    case StmtKind::Release: return "release";
    case StmtKind::Use: return "use";
    case StmtKind::Call: return "call";
    case StmtKind::Return: return "return";
    case StmtKind::Other: return "other";
    case StmtKind::ReleaseIfHeld: return "release_if_held";
    }
    return "other";
}

std::optional<StmtKind> stmt_kind_from_string(std::string_view op) {
    static constexpr StmtKind kinds[] = {StmtKind::Acquire, StmtKind::Release,
                                         StmtKind::Use,     StmtKind::Call,
                                         StmtKind::Return,  StmtKind::Other,
                                         StmtKind::ReleaseIfHeld};
    for (auto k : kinds) {
        if (to_string(k) == op) return k;
    }
    return std::nullopt;
}

const BasicBlock* Procedure::find_block(std::string_view id) const {
    for (const auto& b : blocks) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

BasicBlock* Procedure::find_block(std::string_view id) {
    for (auto& b : blocks) {
        if (b.id == id) return &b;
    }
    return nullptr;
}

const BasicBlock& Procedure::block(std::string_view id) const {
    const auto* b = find_block(id);
    if (b == nullptr) {
        throw ValidationError("procedure '" + name + "' has no block '" + std::string(id) + "'",
                              std::string(id));
    }
    return *b;
}

bool Procedure::is_local(std::string_view ref) const {
    return std::find(locals.begin(), locals.end(), ref) != locals.end();
}

const CallbackGraph& activity_lifecycle() {
    static const CallbackGraph graph{
        "activity",
        {"Starting", "Running", "Closed"},
        "Starting",
        {
            {"Starting", "Running", {"onCreate", "onStart", "onResume"}},
            {"Running", "Running", {"onPause", "onResume"}},
            {"Running", "Closed", {"onPause", "onStop", "onDestroy"}},
        }};
    return graph;
}

namespace {

void require_field(const std::string& value, const std::string& what, const std::string& where) {
    if (value.empty()) {
        throw ValidationError(what + " is empty in " + where, where);
    }
}

void check_statement(const Statement& s, const std::string& where) {
    switch (s.kind) {
    case StmtKind::Acquire:
    case StmtKind::Release:
    case StmtKind::ReleaseIfHeld:
        require_field(s.api, "api", where);
        require_field(s.target, "target", where);
        break;
    case StmtKind::Use:
        require_field(s.target, "target", where);
        break;
    case StmtKind::Call:
        require_field(s.callee, "callee", where);
        break;
    case StmtKind::Return:
    case StmtKind::Other:
        break;
    }
}

void check_procedure(const Procedure& proc) {
    require_field(proc.name, "procedure name", "procedure");
    if (proc.blocks.empty()) {
        throw ValidationError("procedure '" + proc.name + "' has no blocks", proc.name);
    }
    std::set<std::string> ids;
    for (const auto& b : proc.blocks) {
        require_field(b.id, "block id", proc.name);
        if (!ids.insert(b.id).second) {
            throw ValidationError("duplicate block '" + b.id + "' in procedure '" + proc.name + "'",
                                  b.id);
        }
    }
    if (!ids.contains(proc.entry)) {
        throw ValidationError(
            "entry block '" + proc.entry + "' of procedure '" + proc.name + "' does not exist",
            proc.entry);
    }
    for (const auto& b : proc.blocks) {
        for (std::size_t i = 0; i < b.statements.size(); ++i) {
            check_statement(b.statements[i], proc.name + "/" + b.id + "/" + std::to_string(i));
        }
        for (const auto& succ : b.successors) {
            if (!ids.contains(succ)) {
                throw ValidationError("block '" + proc.name + "/" + b.id +
                                          "' has unknown successor '" + succ + "'",
                                      succ);
            }
        }
    }
    std::set<std::string> seen{proc.entry};
    std::deque<std::string> work{proc.entry};
    while (!work.empty()) {
        const auto& b = proc.block(work.front());
        work.pop_front();
        for (const auto& succ : b.successors) {
            if (seen.insert(succ).second) work.push_back(succ);
        }
    }
    for (const auto& b : proc.blocks) {
        if (!seen.contains(b.id)) {
            throw ValidationError(
                "block '" + b.id + "' of procedure '" + proc.name + "' is unreachable", b.id);
        }
    }
    std::set<std::string> locals;
    for (const auto& l : proc.locals) {
        if (!locals.insert(l).second) {
            throw ValidationError("duplicate local '" + l + "' in procedure '" + proc.name + "'", l);
        }
    }
}

void check_lifecycle(const CallbackGraph& g) {
    require_field(g.name, "lifecycle name", "lifecycle");
    std::set<std::string> states(g.states.begin(), g.states.end());
    if (states.size() != g.states.size()) {
        throw ValidationError("lifecycle '" + g.name + "' repeats a state", g.name);
    }
    if (!states.contains(g.initial)) {
        throw ValidationError(
            "initial state '" + g.initial + "' of lifecycle '" + g.name + "' is not a state",
            g.initial);
    }
    for (const auto& e : g.edges) {
        for (const auto* s : {&e.from, &e.to}) {
            if (!states.contains(*s)) {
                throw ValidationError("lifecycle '" + g.name + "' edge uses unknown state '" + *s + "'",
                                      *s);
            }
        }
    }
}

} // namespace

AppModel AppModel::create(std::string name, std::vector<Component> components,
                          std::vector<Procedure> procedures, std::vector<CallbackGraph> lifecycles) {
    AppModel app;
    app.name_ = std::move(name);
    require_field(app.name_, "app name", "app");

    for (auto& g : lifecycles) {
        check_lifecycle(g);
        auto key = g.name;
        if (!app.lifecycles_.emplace(key, std::move(g)).second) {
            throw ValidationError("duplicate lifecycle '" + key + "'", key);
        }
    }
    for (auto& p : procedures) {
        check_procedure(p);
        auto key = p.name;
        if (!app.procedures_.emplace(key, std::move(p)).second) {
            throw ValidationError("duplicate procedure '" + key + "'", key);
        }
    }

    std::set<std::string> component_names;
    for (const auto& c : components) {
        require_field(c.name, "component name", "component");
        if (!component_names.insert(c.name).second) {
            throw ValidationError("duplicate component '" + c.name + "'", c.name);
        }
        if (c.lifecycle != "activity" && !app.lifecycles_.contains(c.lifecycle)) {
            throw ValidationError(
                "component '" + c.name + "' uses unknown lifecycle '" + c.lifecycle + "'",
                c.lifecycle);
        }
        for (const auto& [cb, proc] : c.callbacks) {
            if (!app.procedures_.contains(proc)) {
                throw ValidationError("callback '" + cb + "' of component '" + c.name +
                                          "' names unknown procedure '" + proc + "'",
                                      proc);
            }
        }
    }
    app.components_ = std::move(components);

    for (const auto& [pname, proc] : app.procedures_) {
        auto& callees = app.call_graph_[pname];
        for (const auto& b : proc.blocks) {
            for (const auto& s : b.statements) {
                if (s.kind != StmtKind::Call) continue;
                if (app.procedures_.contains(s.callee)) {
                    callees.insert(s.callee);
                } else if (app.external_callees_.insert(s.callee).second) {
                    app.warnings_.push_back("call to external procedure '" + s.callee +
                                            "' treated as a non-resource operation");
                }
            }
        }
    }
    return app;
}

const Procedure* AppModel::find_procedure(std::string_view name) const {
    auto it = procedures_.find(std::string(name));
    return it == procedures_.end() ? nullptr : &it->second;
}

const Procedure& AppModel::procedure(std::string_view name) const {
    const auto* p = find_procedure(name);
    if (p == nullptr) {
        throw ValidationError("unknown procedure '" + std::string(name) + "'", std::string(name));
    }
    return *p;
}

bool AppModel::is_internal(std::string_view callee) const {
    return procedures_.contains(std::string(callee));
}

const CallbackGraph& AppModel::lifecycle_of(const Component& component) const {
    auto it = lifecycles_.find(component.lifecycle);
    if (it != lifecycles_.end()) return it->second;
    return activity_lifecycle();
}

const Component* AppModel::find_component(std::string_view name) const {
    for (const auto& c : components_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const Statement& AppModel::statement_at(const Origin& origin) const {
    const auto& b = procedure(origin.procedure).block(origin.block);
    if (origin.index >= b.statements.size()) {
        throw ValidationError("no statement at " + origin.to_string(), origin.to_string());
    }
    return b.statements[origin.index];
}

namespace {

std::vector<Procedure> procedure_list(const std::map<std::string, Procedure>& procs) {
    std::vector<Procedure> out;
    out.reserve(procs.size());
    for (const auto& [_, p] : procs) out.push_back(p);
    return out;
}

std::vector<CallbackGraph> lifecycle_list(const std::map<std::string, CallbackGraph>& graphs) {
    std::vector<CallbackGraph> out;
    for (const auto& [_, g] : graphs) out.push_back(g);
    return out;
}

} // namespace

AppModel AppModel::with_procedure(Procedure procedure) const {
    auto procs = procedures_;
    procs.insert_or_assign(procedure.name, std::move(procedure));
    return create(name_, components_, procedure_list(procs), lifecycle_list(lifecycles_));
}

AppModel AppModel::with_component(Component component) const {
    auto comps = components_;
    auto it = std::find_if(comps.begin(), comps.end(),
                           [&](const Component& c) { return c.name == component.name; });
    if (it == comps.end()) {
        throw ValidationError("unknown component '" + component.name + "'", component.name);
    }
    *it = std::move(component);
    return create(name_, std::move(comps), procedure_list(procedures_), lifecycle_list(lifecycles_));
}

bool AppModel::operator==(const AppModel& other) const {
    return name_ == other.name_ && components_ == other.components_ &&
           procedures_ == other.procedures_ && lifecycles_ == other.lifecycles_;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AppModel load_app(const std::string& path) { return parse_app(read_file(path)); }

ResourceSpec load_resource_spec(const std::string& path) {
    return parse_resource_spec(read_file(path));
}

} // namespace drip
