#include "drip/automata.hpp"

namespace drip {

namespace {

PushdownAutomaton reentrant_automaton(const ResourceSpec& spec) {
    PushdownAutomaton pda(resource_alphabet(spec));
    const auto& sigma = pda.alphabet();
    const auto q0 = pda.add_state("q0");
    const auto q1 = pda.add_state("q1");
    const auto q2 = pda.add_state("q2");
    pda.set_initial(q0);
    pda.set_final(q2);

    std::map<std::string, StackSymbol> stack_of;
    for (const auto& a : spec.acquire_ops()) stack_of[a] = pda.add_stack_symbol(a);

    pda.add_rule({q0, kBottom, sigma.at("s"), q1, {kBottom}});
    std::vector<StackSymbol> tops{kBottom};
    for (const auto& [_, g] : stack_of) tops.push_back(g);
    for (const auto& [a, g] : stack_of) {
        for (auto top : tops) pda.add_rule({q1, top, sigma.at(a), q1, {g, top}});
    }
    for (const auto& r : spec.release_ops()) {
        bool matched = false;
        for (const auto& [a, g] : stack_of) {
            if (!spec.matches(a, r)) continue;
            matched = true;
            pda.add_rule({q1, g, sigma.at(r), q1, {}});
        }
        if (!matched) throw SpecError("release '" + r + "' matches no acquire");
    }
    pda.add_rule({q1, kBottom, sigma.at("f"), q2, {kBottom}});
    return pda;
}

FiniteAutomaton non_reentrant_automaton(const ResourceSpec& spec) {
    FiniteAutomaton fa(resource_alphabet(spec));
    const auto& sigma = fa.alphabet();
    const auto start = fa.add_state("start");
    const auto idle = fa.add_state("idle");
    const auto done = fa.add_state("done");
    fa.add_initial(start);
    fa.set_final(done);
    fa.add_transition(start, sigma.at("s"), idle);
    fa.add_transition(idle, sigma.at("f"), done);
    for (const auto& a : spec.acquire_ops()) {
        const auto pending = fa.add_state("held:" + a);
        fa.add_transition(idle, sigma.at(a), pending);
        for (const auto& r : spec.release_ops()) {
            if (spec.matches(a, r)) fa.add_transition(pending, sigma.at(r), idle);
        }
    }
    return fa;
}

} // namespace

ResourceAutomaton resource_automaton(const ResourceSpec& spec) {
    if (spec.reentrant()) return reentrant_automaton(spec);
    return non_reentrant_automaton(spec);
}

bool accepts(const ResourceAutomaton& a, const std::vector<std::string>& word) {
    return std::visit([&](const auto& m) { return m.accepts(word); }, a);
}

ResourceAutomaton complement(const ResourceAutomaton& a) {
    return std::visit([](const auto& m) -> ResourceAutomaton { return complement(m); }, a);
}

} // namespace drip
