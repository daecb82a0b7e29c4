#include "drip/analysis.hpp"

#include <algorithm>

namespace drip {

std::string CycleWarning::message() const {
    return "call graph cycle broken by ignoring the call " + caller + " -> " + callee;
}

namespace {

using CallGraph = std::map<std::string, std::set<std::string>>;

// Back edges of a DFS that starts from procedures in name order and visits callees in name order.
std::vector<std::pair<std::string, std::string>> back_edges(const CallGraph& graph) {
    enum class Color { White, Gray, Black };
    std::map<std::string, Color> color;
    for (const auto& [p, _] : graph) color[p] = Color::White;
    std::vector<std::pair<std::string, std::string>> out;
    struct Frame {
        std::string proc;
        std::set<std::string>::const_iterator next;
    };
    for (const auto& [root, _] : graph) {
        if (color[root] != Color::White) continue;
        std::vector<Frame> stack{{root, graph.at(root).begin()}};
        color[root] = Color::Gray;
        while (!stack.empty()) {
            auto& top = stack.back();
            if (top.next == graph.at(top.proc).end()) {
                color[top.proc] = Color::Black;
                stack.pop_back();
                continue;
            }
            const auto& callee = *top.next++;
            if (color[callee] == Color::Gray) {
                out.emplace_back(top.proc, callee);
            } else if (color[callee] == Color::White) {
                color[callee] = Color::Gray;
                stack.push_back({callee, graph.at(callee).begin()});
            }
        }
    }
    return out;
}

CallGraph acyclic_graph(const AppModel& app, std::vector<CycleWarning>* removed) {
    CallGraph graph;
    for (const auto& [p, _] : app.procedures()) graph[p];
    for (const auto& [p, callees] : app.call_graph()) graph[p] = callees;
    while (true) {
        auto back = back_edges(graph);
        if (back.empty()) break;
        auto smallest = *std::min_element(back.begin(), back.end());
        graph[smallest.first].erase(smallest.second);
        if (removed) removed->push_back({smallest.first, smallest.second});
    }
    return graph;
}

std::vector<std::string> callees_first(const CallGraph& graph) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& [root, _] : graph) {
        if (seen.contains(root)) continue;
        struct Frame {
            std::string proc;
            std::set<std::string>::const_iterator next;
        };
        std::vector<Frame> stack{{root, graph.at(root).begin()}};
        seen.insert(root);
        while (!stack.empty()) {
            auto& top = stack.back();
            if (top.next == graph.at(top.proc).end()) {
                order.push_back(top.proc);
                stack.pop_back();
                continue;
            }
            const auto& callee = *top.next++;
            if (seen.insert(callee).second) stack.push_back({callee, graph.at(callee).begin()});
        }
    }
    return order;
}

} // namespace

std::vector<CycleWarning> break_cycles(const AppModel& app) {
    std::vector<CycleWarning> removed;
    acyclic_graph(app, &removed);
    return removed;
}

Summaries all_calls(const AppModel& app, const ResourceSpec& spec, bool track_uses,
                    bool compute_leaks) {
    Summaries out;
    const auto graph = acyclic_graph(app, &out.warnings);
    out.order = callees_first(graph);
    auto keep = [track_uses](const RfgNode& n) {
        return n.kind == NodeKind::Acquire || n.kind == NodeKind::Release ||
               n.kind == NodeKind::GuardedRelease || (track_uses && n.kind == NodeKind::Use);
    };
    for (const auto& name : out.order) {
        auto g = build_rfg(app.procedure(name), spec, track_uses);
        const auto& callees = graph.at(name);
        const auto original = g.node_count();
        for (std::size_t i = 0; i < original; ++i) {
            const auto node = g.node(i);
            if (node.kind != NodeKind::Transfer || !node.call || !callees.contains(node.op)) continue;
            const auto [in, out_node] = g.splice(out.procedures.at(node.op).graph);
            const auto succ = g.successors(i);
            g.node(i) = RfgNode{NodeKind::Trivial, {}, {}, node.origin};
            g.clear_successors(i);
            g.add_edge(i, in);
            for (auto s : succ) g.add_edge(out_node, s);
        }
        Summary summary{name, {}, contract(g, keep)};
        if (compute_leaks) summary.leaking_paths = leaking_paths(summary.graph, spec);
        out.procedures.emplace(name, std::move(summary));
    }
    return out;
}

} // namespace drip
