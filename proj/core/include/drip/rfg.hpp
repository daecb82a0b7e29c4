#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drip/ir.hpp"

namespace drip {

enum class NodeKind {
    Entry,          // s
    Exit,           // f
    Acquire,        // op = acquire operation
    Release,        // op = release operation
    GuardedRelease, // op = release operation of a ReleaseIfHeld
    Transfer,       // op = callee or operation name
    Trivial,
    ExitNode,       // Return; only inside path graphs, collapsed into f by build_rfg
    Use,            // op = target reference
};

[[nodiscard]] std::string_view to_string(NodeKind kind);

struct RfgNode {
    NodeKind kind = NodeKind::Trivial;
    std::string op;
    std::string target;
    std::optional<Origin> origin;
    bool call = false; // Transfer created by a Call statement

    [[nodiscard]] std::string label() const;

    bool operator==(const RfgNode&) const = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Resource-flow graph. Node 0 is the entry s and node 1 the exit f.
class ResourceFlowGraph {
  public:
    ResourceFlowGraph();

    static constexpr std::size_t entry = 0;
    static constexpr std::size_t exit = 1;

    std::size_t add_node(RfgNode node);
    /// Adds the edge unless it already exists.
    void add_edge(std::size_t from, std::size_t to);
    void clear_successors(std::size_t node) { succ_.at(node).clear(); }

    [[nodiscard]] const RfgNode& node(std::size_t i) const { return nodes_.at(i); }
    [[nodiscard]] RfgNode& node(std::size_t i) { return nodes_.at(i); }
    [[nodiscard]] const std::vector<RfgNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<std::size_t>& successors(std::size_t i) const {
        return succ_.at(i);
    }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const;
    [[nodiscard]] std::vector<Edge> edges() const;

    /// Copies `other` into this graph; its s and f become Trivial nodes.
    /// Returns the indices of the copied s and f.
    std::pair<std::size_t, std::size_t> splice(const ResourceFlowGraph& other);

    /// Nodes reachable from s.
    [[nodiscard]] std::vector<bool> reachable() const;

  private:
    std::vector<RfgNode> nodes_;
    std::vector<std::vector<std::size_t>> succ_;
};

/// Classifies one block's statements into a path of graph nodes.
/// Nodes carry origins (procedure, block id, statement index).
[[nodiscard]] std::vector<RfgNode> build_path_graph(const BasicBlock& block, const ResourceSpec& spec,
                                                    bool track_uses,
                                                    const std::string& procedure = {});

[[nodiscard]] ResourceFlowGraph build_rfg(const Procedure& proc, const ResourceSpec& spec,
                                          bool track_uses);

/// Keeps s, f and the nodes satisfying `keep`; every other node is bypassed so that
/// paths between kept nodes are preserved. Only nodes reachable from s survive.
template <class Keep>
[[nodiscard]] ResourceFlowGraph contract(const ResourceFlowGraph& g, Keep keep);

/// Successor sets after splicing out every node where `keep` is false (s and f always kept).
[[nodiscard]] std::vector<std::vector<std::size_t>> contracted_successors(
    const ResourceFlowGraph& g, const std::vector<bool>& kept);

/// E - N + 2P, P = number of weakly connected components.
[[nodiscard]] long cyclomatic(std::size_t node_count, const std::vector<Edge>& edges);
[[nodiscard]] long cyclomatic(const ResourceFlowGraph& g);
/// Complexity of the effective control-flow graph: reachable blocks plus a virtual
/// entry and exit; a block containing a return only flows to the exit.
[[nodiscard]] long cfg_cyclomatic(const Procedure& proc);
[[nodiscard]] std::size_t cfg_edge_count(const Procedure& proc);
[[nodiscard]] std::size_t cfg_node_count(const Procedure& proc);

[[nodiscard]] std::string to_dot(const ResourceFlowGraph& g, const std::string& name);

template <class Keep>
ResourceFlowGraph contract(const ResourceFlowGraph& g, Keep keep) {
    std::vector<bool> kept(g.node_count(), false);
    auto live = g.reachable();
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        kept[i] = live[i] && (i == ResourceFlowGraph::entry || i == ResourceFlowGraph::exit ||
                              keep(g.node(i)));
    }
    auto succ = contracted_successors(g, kept);
    ResourceFlowGraph out;
    std::vector<std::size_t> index(g.node_count(), 0);
    index[ResourceFlowGraph::entry] = ResourceFlowGraph::entry;
    index[ResourceFlowGraph::exit] = ResourceFlowGraph::exit;
    for (std::size_t i = 2; i < g.node_count(); ++i) {
        if (kept[i]) index[i] = out.add_node(g.node(i));
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!kept[i]) continue;
        for (auto j : succ[i]) out.add_edge(index[i], index[j]);
    }
    return out;
}

} // namespace drip
