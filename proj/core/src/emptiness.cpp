#include "drip/automata.hpp"

#include <queue>
#include <tuple>

// Shortest-word reachability for pushdown automata.
//
// A "context" is a configuration (state, top) reached right after a push (or the initial
// configuration). Within a context the symbols below the top are untouched until the top is
// popped, so reachability splits into
//   path edges  (context, state, top): same-level configurations, cost relative to the context
//   summaries   (context, state):      the context's top was popped, landing in state
// Both are settled in one priority queue ordered by relative cost; a caller waiting on a context
// combines with its summaries when both sides are settled. A second pass computes the absolute
// cost of entering each context, and back-pointers rebuild the rule sequence.

namespace drip {

namespace {

using Cost = std::uint64_t;
constexpr Cost kInfinite = std::numeric_limits<Cost>::max();
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Key3 {
    std::uint32_t a, b, c;
    bool operator==(const Key3&) const = default;
};

struct Key3Hash {
    std::size_t operator()(const Key3& k) const noexcept {
        std::uint64_t h = k.a;
        h = h * 0x100000001B3ULL ^ k.b;
        h = h * 0x100000001B3ULL ^ k.c;
        return std::hash<std::uint64_t>{}(h * 0x9E3779B97F4A7C15ULL);
    }
};

enum class Via : std::uint8_t { Init, Step, Return };

struct PathEdge {
    std::uint32_t ctx;
    State state;
    StackSymbol top;
    Cost cost = kInfinite;
    bool done = false;
    Via via = Via::Init;
    std::uint32_t prev = kNone;    // Step: previous path edge; Return: caller path edge
    std::size_t rule = 0;          // Step: applied rule; Return: push rule
    std::uint32_t summary = kNone; // Return: summary of the pushed context
};

struct Summary {
    std::uint32_t ctx;
    State state;
    Cost cost = kInfinite;
    bool done = false;
    std::uint32_t edge = kNone; // path edge where the pop happened
    std::size_t rule = 0;       // pop rule
};

struct Caller {
    std::uint32_t ctx;
    StackSymbol below;
    Cost base;
    std::uint32_t edge; // path edge where the push happened
    std::size_t rule;   // push rule
};

struct Context {
    State state;
    StackSymbol top;
    std::vector<Caller> callers;
    std::vector<std::uint32_t> summaries; // settled
};

struct Item {
    Cost cost;
    std::uint64_t seq;
    bool summary;
    std::uint32_t id;
    bool operator>(const Item& o) const { return std::tie(cost, seq) > std::tie(o.cost, o.seq); }
};

class Saturation {
  public:
    explicit Saturation(const PushdownAutomaton& pda) : pda_(pda) {}

    void run() {
        const auto c0 = context(pda_.initial(), kBottom);
        relax_edge(c0, pda_.initial(), kBottom, 0, Via::Init, kNone, 0, kNone);
        while (!queue_.empty()) {
            auto item = queue_.top();
            queue_.pop();
            if (item.summary) {
                auto& s = summaries_[item.id];
                if (s.done || s.cost != item.cost) continue;
                s.done = true;
                settle_summary(item.id);
            } else {
                auto& e = edges_[item.id];
                if (e.done || e.cost != item.cost) continue;
                e.done = true;
                settle_edge(item.id);
            }
        }
        entry_costs();
    }

    std::map<State, Witness> witnesses() const {
        std::map<State, std::pair<Cost, std::uint32_t>> best;
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            if (!e.done || !pda_.is_final(e.state) || entry_[e.ctx] == kInfinite) continue;
            const Cost total = entry_[e.ctx] + e.cost;
            auto it = best.find(e.state);
            if (it == best.end() || total < it->second.first) best[e.state] = {total, i};
        }
        std::map<State, Witness> out;
        for (const auto& [q, b] : best) out.emplace(q, build(b.second));
        return out;
    }

  private:
    static Cost weight(const PdaRule& r) { return r.input == kEpsilon ? 0 : 1; }

    std::uint32_t context(State q, StackSymbol top) {
        auto [it, fresh] = context_ids_.emplace(Key3{q, top, 0}, 0);
        if (fresh) {
            it->second = static_cast<std::uint32_t>(contexts_.size());
            contexts_.push_back({q, top, {}, {}});
        }
        return it->second;
    }

    void relax_edge(std::uint32_t ctx, State q, StackSymbol top, Cost cost, Via via,
                    std::uint32_t prev, std::size_t rule, std::uint32_t summary) {
        auto [it, fresh] = edge_ids_.emplace(Key3{ctx, q, top}, 0);
        if (fresh) {
            it->second = static_cast<std::uint32_t>(edges_.size());
            edges_.push_back({ctx, q, top});
        }
        auto& e = edges_[it->second];
        if (e.done || cost >= e.cost) return;
        e.cost = cost;
        e.via = via;
        e.prev = prev;
        e.rule = rule;
        e.summary = summary;
        queue_.push({cost, seq_++, false, it->second});
    }

    void relax_summary(std::uint32_t ctx, State q, Cost cost, std::uint32_t edge, std::size_t rule) {
        auto [it, fresh] = summary_ids_.emplace(Key3{ctx, q, 0}, 0);
        if (fresh) {
            it->second = static_cast<std::uint32_t>(summaries_.size());
            summaries_.push_back({ctx, q});
        }
        auto& s = summaries_[it->second];
        if (s.done || cost >= s.cost) return;
        s.cost = cost;
        s.edge = edge;
        s.rule = rule;
        queue_.push({cost, seq_++, true, it->second});
    }

    void settle_edge(std::uint32_t id) {
        const auto e = edges_[id];
        for (auto r : pda_.rules_from(e.state, e.top)) {
            const auto& rule = pda_.rules()[r];
            const Cost c = e.cost + weight(rule);
            if (rule.push.empty()) {
                relax_summary(e.ctx, rule.to, c, id, r);
            } else if (rule.push.size() == 1) {
                relax_edge(e.ctx, rule.to, rule.push[0], c, Via::Step, id, r, kNone);
            } else {
                const auto callee = context(rule.to, rule.push[0]);
                Caller caller{e.ctx, rule.push[1], c, id, r};
                contexts_[callee].callers.push_back(caller);
                relax_edge(callee, rule.to, rule.push[0], 0, Via::Init, kNone, 0, kNone);
                for (auto s : contexts_[callee].summaries) combine(caller, s);
            }
        }
    }

    void settle_summary(std::uint32_t id) {
        const auto ctx = summaries_[id].ctx;
        contexts_[ctx].summaries.push_back(id);
        for (const auto& caller : contexts_[ctx].callers) combine(caller, id);
    }

    void combine(const Caller& caller, std::uint32_t summary) {
        const auto& s = summaries_[summary];
        relax_edge(caller.ctx, s.state, caller.below, caller.base + s.cost, Via::Return, caller.edge,
                   caller.rule, summary);
    }

    // Absolute cost of entering each context, plus the caller used to get there.
    void entry_costs() {
        entry_.assign(contexts_.size(), kInfinite);
        entry_via_.assign(contexts_.size(), {kNone, 0});
        using QItem = std::tuple<Cost, std::uint64_t, std::uint32_t>;
        std::priority_queue<QItem, std::vector<QItem>, std::greater<>> q;
        std::uint64_t seq = 0;
        // context 0 is the initial configuration
        entry_[0] = 0;
        q.emplace(0, seq++, 0);
        std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> out(contexts_.size());
        for (std::uint32_t c = 0; c < contexts_.size(); ++c) {
            for (std::size_t k = 0; k < contexts_[c].callers.size(); ++k) {
                out[contexts_[c].callers[k].ctx].emplace_back(c, k);
            }
        }
        std::vector<bool> done(contexts_.size(), false);
        while (!q.empty()) {
            auto [cost, _, c] = q.top();
            q.pop();
            if (done[c]) continue;
            done[c] = true;
            for (const auto& [callee, k] : out[c]) {
                const auto& caller = contexts_[callee].callers[k];
                const Cost total = cost + caller.base;
                if (total < entry_[callee]) {
                    entry_[callee] = total;
                    entry_via_[callee] = {c, k};
                    q.emplace(total, seq++, callee);
                }
            }
        }
    }

    Witness build(std::uint32_t final_edge) const {
        enum class Task : std::uint8_t { Rule, Edge, Summary, Enter };
        std::vector<std::pair<Task, std::size_t>> stack{{Task::Edge, final_edge},
                                                        {Task::Enter, edges_[final_edge].ctx}};
        std::vector<std::size_t> rules;
        while (!stack.empty()) {
            auto [task, id] = stack.back();
            stack.pop_back();
            switch (task) {
            case Task::Rule:
                rules.push_back(id);
                break;
            case Task::Edge: {
                const auto& e = edges_[id];
                if (e.via == Via::Step) {
                    stack.emplace_back(Task::Rule, e.rule);
                    stack.emplace_back(Task::Edge, e.prev);
                } else if (e.via == Via::Return) {
                    stack.emplace_back(Task::Summary, e.summary);
                    stack.emplace_back(Task::Rule, e.rule);
                    stack.emplace_back(Task::Edge, e.prev);
                }
                break;
            }
            case Task::Summary: {
                const auto& s = summaries_[id];
                stack.emplace_back(Task::Rule, s.rule);
                stack.emplace_back(Task::Edge, s.edge);
                break;
            }
            case Task::Enter: {
                if (id == 0) break;
                const auto [from, k] = entry_via_[id];
                const auto& caller = contexts_[id].callers[k];
                stack.emplace_back(Task::Rule, caller.rule);
                stack.emplace_back(Task::Edge, caller.edge);
                stack.emplace_back(Task::Enter, from);
                break;
            }
            }
        }
        Witness w;
        w.states.push_back(pda_.initial());
        for (auto r : rules) {
            const auto& rule = pda_.rules()[r];
            if (rule.input != kEpsilon) {
                const auto& info = pda_.alphabet().info(rule.input);
                w.symbols.push_back(info.name);
                w.provenance.push_back(info.origin);
            }
            w.states.push_back(rule.to);
        }
        return w;
    }

    const PushdownAutomaton& pda_;
    std::vector<Context> contexts_;
    std::unordered_map<Key3, std::uint32_t, Key3Hash> context_ids_;
    std::vector<PathEdge> edges_;
    std::unordered_map<Key3, std::uint32_t, Key3Hash> edge_ids_;
    std::vector<Summary> summaries_;
    std::unordered_map<Key3, std::uint32_t, Key3Hash> summary_ids_;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    std::vector<Cost> entry_;
    std::vector<std::pair<std::uint32_t, std::size_t>> entry_via_;
};

} // namespace

std::map<State, Witness> shortest_witnesses(const PushdownAutomaton& pda) {
    if (pda.state_count() == 0) return {};
    Saturation sat(pda);
    sat.run();
    return sat.witnesses();
}

std::optional<Witness> emptiness(const PushdownAutomaton& pda) {
    auto all = shortest_witnesses(pda);
    const Witness* best = nullptr;
    for (const auto& [_, w] : all) {
        if (best == nullptr || w.symbols.size() < best->symbols.size() ||
            (w.symbols.size() == best->symbols.size() && w.symbols < best->symbols)) {
            best = &w;
        }
    }
    if (best == nullptr) return std::nullopt;
    return *best;
}

} // namespace drip
