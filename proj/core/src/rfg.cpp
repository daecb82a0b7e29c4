#include "drip/rfg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace drip {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Exit: return "exit";
    case NodeKind::Acquire: return "acquire";
    case NodeKind::Release: return "release";
    case NodeKind::GuardedRelease: return "release_if_held";
    case NodeKind::Transfer: return "transfer";
    case NodeKind::Trivial: return "trivial";
    case NodeKind::ExitNode: return "return";
    case NodeKind::Use: return "use";
    }
    return "trivial";
}

std::string RfgNode::label() const {
    switch (kind) {
    case NodeKind::Entry: return "s";
    case NodeKind::Exit: return "f";
    case NodeKind::Acquire:
    case NodeKind::Release: return op;
    case NodeKind::GuardedRelease: return "rif:" + op;
    case NodeKind::Transfer: return "T(" + op + ")";
    case NodeKind::Trivial: return "-";
    case NodeKind::ExitNode: return "ret";
    case NodeKind::Use: return "use:" + op;
    }
    return "-";
}

ResourceFlowGraph::ResourceFlowGraph() {
    add_node({NodeKind::Entry, {}, {}, std::nullopt});
    add_node({NodeKind::Exit, {}, {}, std::nullopt});
}

std::size_t ResourceFlowGraph::add_node(RfgNode node) {
    nodes_.push_back(std::move(node));
    succ_.emplace_back();
    return nodes_.size() - 1;
}

void ResourceFlowGraph::add_edge(std::size_t from, std::size_t to) {
    auto& out = succ_.at(from);
    if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
}

std::size_t ResourceFlowGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
}

std::vector<Edge> ResourceFlowGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
        for (auto j : succ_[i]) out.emplace_back(i, j);
    }
    return out;
}

std::pair<std::size_t, std::size_t> ResourceFlowGraph::splice(const ResourceFlowGraph& other) {
    const std::size_t base = nodes_.size();
    for (const auto& n : other.nodes_) {
        auto copy = n;
        if (copy.kind == NodeKind::Entry || copy.kind == NodeKind::Exit) {
            copy = RfgNode{NodeKind::Trivial, {}, {}, std::nullopt};
        }
        add_node(std::move(copy));
    }
    for (std::size_t i = 0; i < other.succ_.size(); ++i) {
        for (auto j : other.succ_[i]) succ_[base + i].push_back(base + j);
    }
    return {base + entry, base + exit};
}

std::vector<bool> ResourceFlowGraph::reachable() const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::size_t> stack{entry};
    seen[entry] = true;
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        for (auto m : succ_[n]) {
            if (!seen[m]) {
                seen[m] = true;
                stack.push_back(m);
            }
        }
    }
    return seen;
}

std::vector<RfgNode> build_path_graph(const BasicBlock& block, const ResourceSpec& spec,
                                      bool track_uses, const std::string& procedure) {
    std::vector<RfgNode> path;
    for (std::size_t i = 0; i < block.statements.size(); ++i) {
        const auto& s = block.statements[i];
        Origin origin{procedure, block.id, i};
        switch (s.kind) {
        case StmtKind::Acquire:
            if (spec.is_acquire(s.api)) {
                path.push_back({NodeKind::Acquire, s.api, s.target, origin});
            } else {
                path.push_back({NodeKind::Transfer, s.api, {}, origin});
            }
            break;
        case StmtKind::Release:
            if (spec.is_release(s.api)) {
                path.push_back({NodeKind::Release, s.api, s.target, origin});
            } else {
                path.push_back({NodeKind::Transfer, s.api, {}, origin});
            }
            break;
        case StmtKind::ReleaseIfHeld:
            if (spec.is_release(s.api)) {
                path.push_back({NodeKind::GuardedRelease, s.api, s.target, origin});
            } else {
                path.push_back({NodeKind::Transfer, s.api, {}, origin});
            }
            break;
        case StmtKind::Call:
            path.push_back({NodeKind::Transfer, s.callee, {}, origin, true});
            break;
        case StmtKind::Other:
            if (!s.api.empty()) path.push_back({NodeKind::Transfer, s.api, {}, origin});
            break;
        case StmtKind::Use:
            if (track_uses) path.push_back({NodeKind::Use, s.target, s.target, origin});
            break;
        case StmtKind::Return:
            path.push_back({NodeKind::ExitNode, {}, {}, origin});
            return path;
        }
    }
    if (path.empty()) path.push_back({NodeKind::Trivial, {}, {}, Origin{procedure, block.id, 0}});
    return path;
}

namespace {

bool has_return(const BasicBlock& b) {
    return std::any_of(b.statements.begin(), b.statements.end(),
                       [](const Statement& s) { return s.kind == StmtKind::Return; });
}

// Blocks reachable from the entry when a return ends its block.
std::vector<const BasicBlock*> live_blocks(const Procedure& proc) {
    std::set<std::string> seen{proc.entry};
    std::deque<const BasicBlock*> work{&proc.block(proc.entry)};
    while (!work.empty()) {
        const auto* b = work.front();
        work.pop_front();
        if (has_return(*b)) continue;
        for (const auto& s : b->successors) {
            if (seen.insert(s).second) work.push_back(&proc.block(s));
        }
    }
    std::vector<const BasicBlock*> out;
    for (const auto& b : proc.blocks) {
        if (seen.contains(b.id)) out.push_back(&b);
    }
    return out;
}

std::vector<std::string> unique_successors(const BasicBlock& b) {
    std::vector<std::string> out;
    for (const auto& s : b.successors) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

} // namespace

ResourceFlowGraph build_rfg(const Procedure& proc, const ResourceSpec& spec, bool track_uses) {
    ResourceFlowGraph g;
    struct Span {
        std::size_t first;
        std::size_t last;
        bool returns;
    };
    std::map<std::string, Span> spans;
    const auto blocks = live_blocks(proc);
    for (const auto* b : blocks) {
        auto path = build_path_graph(*b, spec, track_uses, proc.name);
        bool returns = path.back().kind == NodeKind::ExitNode;
        if (returns) path.pop_back();
        if (path.empty()) {
            spans[b->id] = {ResourceFlowGraph::exit, ResourceFlowGraph::exit, true};
            continue;
        }
        std::size_t first = g.add_node(path.front());
        std::size_t last = first;
        for (std::size_t i = 1; i < path.size(); ++i) {
            auto n = g.add_node(path[i]);
            g.add_edge(last, n);
            last = n;
        }
        spans[b->id] = {first, last, returns};
    }
    g.add_edge(ResourceFlowGraph::entry, spans.at(proc.entry).first);
    for (const auto* b : blocks) {
        const auto& span = spans.at(b->id);
        if (span.first == ResourceFlowGraph::exit) continue;
        if (span.returns || b->successors.empty()) {
            g.add_edge(span.last, ResourceFlowGraph::exit);
            continue;
        }
        for (const auto& succ : unique_successors(*b)) {
            g.add_edge(span.last, spans.at(succ).first);
        }
    }
    return g;
}

std::vector<std::vector<std::size_t>> contracted_successors(const ResourceFlowGraph& g,
                                                            const std::vector<bool>& kept) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> mark(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!kept[i]) continue;
        std::vector<std::size_t> found;
        std::vector<std::size_t> todo;
        for (auto s : g.successors(i)) {
            if (mark[s] != i) {
                mark[s] = i;
                todo.push_back(s);
            }
        }
        while (!todo.empty()) {
            auto m = todo.back();
            todo.pop_back();
            if (kept[m]) {
                found.push_back(m);
                continue;
            }
            for (auto s : g.successors(m)) {
                if (mark[s] != i) {
                    mark[s] = i;
                    todo.push_back(s);
                }
            }
        }
        std::sort(found.begin(), found.end());
        out[i] = std::move(found);
    }
    return out;
}

long cyclomatic(std::size_t node_count, const std::vector<Edge>& edges) {
    std::vector<std::size_t> parent(node_count);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = node_count;
    for (const auto& [a, b] : edges) {
        auto ra = find(a);
        auto rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return static_cast<long>(edges.size()) - static_cast<long>(node_count) +
           2 * static_cast<long>(components);
}

long cyclomatic(const ResourceFlowGraph& g) { return cyclomatic(g.node_count(), g.edges()); }

namespace {

struct CfgShape {
    std::size_t nodes = 0;
    std::vector<Edge> edges;
};

CfgShape cfg_shape(const Procedure& proc) {
    const auto blocks = live_blocks(proc);
    std::map<std::string, std::size_t> index;
    // 0 = virtual entry, 1 = virtual exit
    for (const auto* b : blocks) index.emplace(b->id, index.size() + 2);
    CfgShape shape;
    shape.nodes = blocks.size() + 2;
    shape.edges.emplace_back(0, index.at(proc.entry));
    for (const auto* b : blocks) {
        auto from = index.at(b->id);
        if (has_return(*b) || b->successors.empty()) {
            shape.edges.emplace_back(from, 1);
            continue;
        }
        for (const auto& s : unique_successors(*b)) shape.edges.emplace_back(from, index.at(s));
    }
    return shape;
}

} // namespace

long cfg_cyclomatic(const Procedure& proc) {
    auto shape = cfg_shape(proc);
    return cyclomatic(shape.nodes, shape.edges);
}

std::size_t cfg_edge_count(const Procedure& proc) { return cfg_shape(proc).edges.size(); }

std::size_t cfg_node_count(const Procedure& proc) { return cfg_shape(proc).nodes; }

std::string to_dot(const ResourceFlowGraph& g, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto& n = g.node(i);
        out << "  n" << i << " [label=\"" << n.label();
        if (n.origin) out << "\\n" << n.origin->to_string();
        out << "\"";
        if (n.kind == NodeKind::Entry || n.kind == NodeKind::Exit) out << " shape=doublecircle";
        out << "];\n";
    }
    for (const auto& [a, b] : g.edges()) out << "  n" << a << " -> n" << b << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace drip
