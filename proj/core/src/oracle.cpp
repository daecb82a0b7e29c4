#include "drip/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace drip {

namespace {

struct Held {
    std::string op;
    Origin origin;

    auto operator<=>(const Held&) const = default;
    bool operator==(const Held&) const = default;
};

struct SimState {
    std::vector<Held> stack; // bottom first
    std::string error;

    auto operator<=>(const SimState&) const = default;
    bool operator==(const SimState&) const = default;
};

enum class Mode { Leaks, Misuse };

// Calls that stay after removing, one at a time, the smallest edge that closes a cycle in a
// name-ordered depth-first search.
std::map<std::string, std::set<std::string>> acyclic_calls(const AppModel& app) {
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& [name, p] : app.procedures()) {
        auto& out = calls[name];
        for (const auto& b : p.blocks) {
            for (const auto& s : b.statements) {
                if (s.kind == StmtKind::Call && app.find_procedure(s.callee)) out.insert(s.callee);
            }
        }
    }
    while (true) {
        std::map<std::string, int> mark; // 0 new, 1 on stack, 2 finished
        std::set<std::pair<std::string, std::string>> closing;
        std::function<void(const std::string&)> visit = [&](const std::string& p) {
            mark[p] = 1;
            for (const auto& q : calls[p]) {
                if (mark[q] == 1) {
                    closing.emplace(p, q);
                } else if (mark[q] == 0) {
                    visit(q);
                }
            }
            mark[p] = 2;
        };
        for (const auto& [p, _] : calls) {
            if (mark[p] == 0) visit(p);
        }
        if (closing.empty()) return calls;
        const auto& [from, to] = *closing.begin();
        calls[from].erase(to);
    }
}

std::vector<std::vector<std::string>> maximal_runs(const CallbackGraph& g, int depth) {
    std::vector<std::vector<std::string>> runs;
    std::map<std::string, int> count{{g.initial, 1}};
    std::vector<std::string> current;
    std::function<void(const std::string&)> go = [&](const std::string& state) {
        bool moved = false;
        for (const auto& e : g.edges) {
            if (e.from != state || count[e.to] == depth) continue;
            moved = true;
            ++count[e.to];
            for (const auto& cb : e.callbacks) current.push_back(cb);
            go(e.to);
            current.resize(current.size() - e.callbacks.size());
            --count[e.to];
        }
        if (!moved) runs.push_back(current);
    };
    go(g.initial);
    std::sort(runs.begin(), runs.end());
    runs.erase(std::unique(runs.begin(), runs.end()), runs.end());
    return runs;
}

class Simulator {
  public:
    Simulator(const AppModel& app, const ResourceSpec& spec, Mode mode, const OracleOptions& options)
        : app_(app), spec_(spec), mode_(mode), options_(options), calls_(acyclic_calls(app)) {}

    std::set<SimState> run_sequence(const Component& component,
                                    const std::vector<std::string>& callbacks) {
        std::set<SimState> states{SimState{}};
        for (const auto& cb : callbacks) {
            auto it = component.callbacks.find(cb);
            if (it == component.callbacks.end()) continue;
            std::set<SimState> next;
            for (const auto& s : states) {
                const auto& out = run(it->second, s);
                next.insert(out.begin(), out.end());
            }
            states = std::move(next);
        }
        return states;
    }

  private:
    const std::set<SimState>& run(const std::string& procedure, const SimState& in) {
        auto key = std::make_pair(procedure, in);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto& p = app_.procedure(procedure);
        std::set<SimState> out;
        std::map<std::string, int> visits{{p.entry, 1}};
        enter_block();
        execute(p, p.entry, 0, in, visits, out);
        return memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    void enter_block() {
        if (++explored_ > options_.path_cap) {
            throw BudgetExceeded("oracle explored more than " + std::to_string(options_.path_cap) +
                                 " block paths");
        }
    }

    void execute(const Procedure& p, const std::string& block_id, std::size_t index,
                 SimState state, std::map<std::string, int>& visits, std::set<SimState>& out) {
        const auto& block = p.block(block_id);
        for (std::size_t i = index; i < block.statements.size(); ++i) {
            const auto& s = block.statements[i];
            if (s.kind == StmtKind::Return) {
                out.insert(std::move(state));
                return;
            }
            if (s.kind == StmtKind::Call) {
                if (!calls_.at(p.name).contains(s.callee)) continue;
                const auto& after = run(s.callee, state);
                for (const auto& next : after) execute(p, block_id, i + 1, next, visits, out);
                return;
            }
            if (!step(s, Origin{p.name, block_id, i}, state)) return;
        }
        if (block.successors.empty()) {
            out.insert(std::move(state));
            return;
        }
        for (const auto& next : block.successors) {
            if (visits[next] >= options_.loop_bound) continue;
            ++visits[next];
            enter_block();
            execute(p, next, 0, state, visits, out);
            --visits[next];
        }
    }

    void fail(SimState& state, const char* kind) {
        state.stack.clear();
        state.error = kind;
    }

    // false when the statement cannot execute in this state
    bool step(const Statement& s, const Origin& origin, SimState& state) {
        if (!state.error.empty()) return true;
        auto& stack = state.stack;
        switch (s.kind) {
        case StmtKind::Acquire:
            if (!spec_.is_acquire(s.api)) return true;
            if (!spec_.reentrant() && !stack.empty()) return false;
            stack.push_back({s.api, origin});
            return true;
        case StmtKind::Release:
            if (!spec_.is_release(s.api)) return true;
            if (stack.empty() || !spec_.matches(stack.back().op, s.api)) {
                if (mode_ == Mode::Leaks) return false;
                fail(state, "DoubleRelease");
                return true;
            }
            stack.pop_back();
            return true;
        case StmtKind::ReleaseIfHeld:
            if (!spec_.is_release(s.api)) return true;
            while (!stack.empty() && spec_.matches(stack.back().op, s.api)) stack.pop_back();
            return true;
        case StmtKind::Use:
            if (mode_ == Mode::Misuse && stack.empty()) fail(state, "UseAfterRelease");
            return true;
        default:
            return true;
        }
    }

    const AppModel& app_;
    const ResourceSpec& spec_;
    Mode mode_;
    OracleOptions options_;
    std::map<std::string, std::set<std::string>> calls_;
    std::map<std::pair<std::string, SimState>, std::set<SimState>> memo_;
    std::uint64_t explored_ = 0;
};

void check_depth(const OracleOptions& options) {
    if (options.depth < 1 || options.loop_bound < 1) {
        throw Error("oracle depth and loop bound must be at least 1");
    }
}

} // namespace

std::set<OracleLeak> oracle_leaks(const AppModel& app, const ResourceSpec& spec,
                                  const OracleOptions& options) {
    check_depth(options);
    const auto& target =
        options.late ? spec.release_callbacks().back() : spec.release_callbacks().front();
    Simulator sim(app, spec, Mode::Leaks, options);
    std::set<OracleLeak> out;
    for (const auto& component : app.components()) {
        std::set<std::vector<std::string>> prefixes;
        for (const auto& run : maximal_runs(app.lifecycle_of(component), options.depth)) {
            for (std::size_t i = 0; i < run.size(); ++i) {
                if (run[i] == target) prefixes.emplace(run.begin(), run.begin() + i + 1);
            }
        }
        for (const auto& prefix : prefixes) {
            for (const auto& state : sim.run_sequence(component, prefix)) {
                if (!state.stack.empty()) out.insert({component.name, state.stack.front().origin});
            }
        }
    }
    return out;
}

std::set<OracleViolation> oracle_violations(const AppModel& app, const ResourceSpec& spec,
                                            const OracleOptions& options) {
    std::set<OracleViolation> out;
    for (const auto& leak : oracle_leaks(app, spec, options)) out.insert({leak.component, "NewLeak"});
    Simulator sim(app, spec, Mode::Misuse, options);
    for (const auto& component : app.components()) {
        for (const auto& run : maximal_runs(app.lifecycle_of(component), options.depth)) {
            for (const auto& state : sim.run_sequence(component, run)) {
                if (!state.error.empty()) out.insert({component.name, state.error});
            }
        }
    }
    return out;
}

} // namespace drip
