#include "drip/automata.hpp"

namespace drip {

namespace {

std::optional<SymbolInfo> node_symbol(const RfgNode& n, const FlowOptions& options) {
    auto tagged = [&](std::string name) {
        if (options.tag_origins && n.origin) name += "@" + n.origin->to_string();
        return name;
    };
    switch (n.kind) {
    case NodeKind::Entry: return SymbolInfo{"s", SymbolKind::Start, {}, {}};
    case NodeKind::Exit: return SymbolInfo{"f", SymbolKind::Finish, {}, {}};
    case NodeKind::Acquire: return SymbolInfo{tagged(n.op), SymbolKind::Acquire, n.op, n.origin};
    case NodeKind::Release: return SymbolInfo{tagged(n.op), SymbolKind::Release, n.op, n.origin};
    case NodeKind::GuardedRelease:
        return SymbolInfo{tagged("rif:" + n.op), SymbolKind::GuardedRelease, n.op, n.origin};
    case NodeKind::Use:
        if (!options.keep_uses) return std::nullopt;
        return SymbolInfo{tagged("use:" + n.target), SymbolKind::Use, n.target, n.origin};
    case NodeKind::Transfer:
    case NodeKind::Trivial:
    case NodeKind::ExitNode: return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

FiniteAutomaton flow_automaton(const ResourceFlowGraph& g, const ResourceSpec& spec,
                               FlowOptions options) {
    FiniteAutomaton nfa(resource_alphabet(spec));
    std::vector<Symbol> symbol_of(g.node_count(), kEpsilon);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        nfa.add_state();
        if (auto info = node_symbol(g.node(i), options)) symbol_of[i] = nfa.alphabet().add(*info);
    }
    const auto e = nfa.add_state("e");
    nfa.add_initial(static_cast<State>(ResourceFlowGraph::entry));
    nfa.set_final(e);
    for (std::size_t m = 0; m < g.node_count(); ++m) {
        for (auto n : g.successors(m)) {
            nfa.add_transition(static_cast<State>(m), symbol_of[m], static_cast<State>(n));
        }
    }
    nfa.add_transition(static_cast<State>(ResourceFlowGraph::exit), symbol_of[ResourceFlowGraph::exit], e);
    return nfa.determinize();
}

} // namespace drip
